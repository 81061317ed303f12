#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "closure/enumerate.hpp"
#include "closure/extremal.hpp"
#include "closure/formulas.hpp"
#include "closure/membership.hpp"
#include "closure/multidomain.hpp"
#include "closure/oracle.hpp"
#include "closure/udclosure.hpp"

namespace closure::cli {

namespace {

using Clock = std::chrono::steady_clock;

// Input problems that are not format errors (missing file, bad flag value).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FormatError with the file name prepended.
struct FileFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string clone, input, vector, up, down, side = "max";
    std::vector<std::string> ops;
    std::size_t limit = 0;
    bool stats = false, sorted = false;
};

struct GenOptions {
    std::size_t n = 6, m = 4, width = 3;
    std::uint64_t seed = 1;
    double density = 0.5;
    bool relation = false;
    std::string input;
};

template <class F>
auto with_file(const std::string& path, F&& read) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return read(in);
    } catch (const FormatError& e) {
        throw FileFormatError(path + ": " + e.what());
    }
}

RawRelation load_raw(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    return with_file(o.input, [](std::istream& in) { return read_raw_relation(in); });
}

Relation boolean_of(const RawRelation& raw) {
    if (raw.d != 2) throw UsageError("this command needs a boolean relation (d=2) unless --op is given");
    std::vector<BitVector> rows;
    for (const auto& row : raw.rows) {
        BitVector v(raw.n);
        for (std::size_t i = 0; i < raw.n; ++i)
            if (row[i]) v.set(i);
        rows.push_back(std::move(v));
    }
    return Relation(raw.n, rows);
}

DomainRelation domain_of(const RawRelation& raw) { return DomainRelation(raw.n, raw.d, raw.rows); }

std::vector<OperationTable> load_ops(const Options& o) {
    std::vector<OperationTable> out;
    for (const auto& path : o.ops) out.push_back(with_file(path, [](std::istream& in) { return read_operation(in); }));
    return out;
}

// Exactly one of --clone and --op.
bool uses_ops(const Options& o) {
    if (o.clone.empty() == o.ops.empty()) throw UsageError("give exactly one of --clone and --op");
    return !o.ops.empty();
}

bool boolean_ops(const std::vector<OperationTable>& ops, const RawRelation& raw) {
    for (const auto& op : ops)
        if (op.domain_size() != raw.d) throw UsageError("operation domain differs from the relation's d");
    return raw.d == 2;
}

IndexSet parse_indices(const std::string& text, std::size_t n, const char* flag) {
    std::vector<std::size_t> members;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9)
            throw UsageError(std::string(flag) + ": expected comma-separated coordinates, got '" + text + "'");
        std::size_t i = std::stoul(item);
        if (i < 1 || i > n) throw UsageError(std::string(flag) + ": coordinate " + item + " outside 1.." + std::to_string(n));
        members.push_back(i);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return IndexSet(n, members);
}

UDSpec parse_ud(const Options& o, std::size_t n) {
    UDSpec ud{parse_indices(o.up, n, "--up"), parse_indices(o.down, n, "--down")};
    ud.validate(n);
    return ud;
}

BitVector parse_bits(const std::string& s, std::size_t max_width, bool exact) {
    if (s.find_first_not_of("01") != std::string::npos) throw UsageError("--vector must be a 0/1 string");
    if (exact ? s.size() != max_width : s.size() > max_width)
        throw UsageError("--vector has length " + std::to_string(s.size()) + ", relation width is " + std::to_string(max_width));
    return BitVector::from_string(s);
}

DomainVector parse_digits(const std::string& s, const RawRelation& raw) {
    if (s.size() != raw.n) throw UsageError("--vector length differs from the relation width");
    DomainVector v;
    for (char c : s) {
        if (c < '0' || c > '9' || static_cast<std::size_t>(c - '0') >= raw.d) throw UsageError("--vector has a digit outside the domain");
        v.push_back(static_cast<unsigned char>(c - '0'));
    }
    return v;
}

void report(std::ostream& out, const StreamStats& s, std::size_t emitted, Clock::duration wall) {
    out << "# algorithm: " << s.algorithm << '\n'
        << "# solutions: " << emitted << '\n'
        << "# wall_ms: " << std::fixed << std::setprecision(3) << std::chrono::duration<double, std::milli>(wall).count() << '\n'
        << "# preprocessing_ticks: " << s.preprocessing_ticks << '\n'
        << "# max_delay_ticks: " << s.max_delay_ticks << '\n'
        << "# total_ticks: " << s.total_ticks << '\n'
        << "# polynomial_delay: " << (s.polynomial_delay ? "yes" : "no") << '\n'
        << "# reductions:";
    if (s.reductions.empty()) out << " none";
    for (const auto& r : s.reductions) out << ' ' << r;
    out << std::endl;
}

std::string line_of(const BitVector& v) { return v.to_string(); }
std::string line_of(const DomainVector& v) { return to_string(v); }

template <class T>
int emit(BasicStream<T>& s, const Options& o, std::ostream& out, Clock::time_point start) {
    T v;
    std::size_t count = 0;
    auto more = [&] { return (o.limit == 0 || count < o.limit) && s.next(v); };
    if (o.sorted) {
        std::vector<std::string> lines;
        while (more()) {
            lines.push_back(line_of(v));
            ++count;
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) out << l << '\n';
        out.flush();
    } else {
        while (more()) {
            out << line_of(v) << std::endl;
            ++count;
        }
    }
    if (o.stats) report(out, s.stats(), count, Clock::now() - start);
    return Ok;
}

DomainStreamPtr domain_stream(const std::vector<OperationTable>& ops, const DomainRelation& r) {
    for (const auto& op : ops)
        if (detect_near_unanimity(op)) return enum_nu(ops, r);
    if (ops.size() == 1 && is_associative(ops[0])) return enum_assoc(ops[0], r);
    auto rows = saturate_domain(r, ops).rows();
    return std::make_unique<ListStream<DomainVector>>(std::move(rows), "saturation", false);
}

int cmd_enumerate(const Options& o, std::ostream& out) {
    const auto start = Clock::now();
    RawRelation raw = load_raw(o);
    const bool has_ud = !o.up.empty() || !o.down.empty();
    if (uses_ops(o)) {
        auto ops = load_ops(o);
        if (has_ud) throw UsageError("--up/--down need --clone");
        if (!boolean_ops(ops, raw)) {
            auto s = domain_stream(ops, domain_of(raw));
            return emit(*s, o, out, start);
        }
        auto s = enumerate(CloneSpec{ops}, boolean_of(raw));
        return emit(*s, o, out, start);
    }
    CloneId c = CloneId::parse(o.clone);
    Relation r = boolean_of(raw);
    auto s = has_ud ? enum_ud(c, r, parse_ud(o, r.width())) : enumerate(c, r);
    return emit(*s, o, out, start);
}

int verdict(bool yes, std::ostream& out) {
    out << (yes ? "true" : "false") << std::endl;
    return yes ? Ok : False;
}

int cmd_member(const Options& o, std::ostream& out) {
    RawRelation raw = load_raw(o);
    if (o.vector.empty()) throw UsageError("--vector is required");
    const bool has_ud = !o.up.empty() || !o.down.empty();
    if (uses_ops(o)) {
        auto ops = load_ops(o);
        if (has_ud) throw UsageError("--up/--down need --clone");
        if (!boolean_ops(ops, raw)) {
            DomainRelation r = domain_of(raw);
            DomainVector v = parse_digits(o.vector, raw);
            for (const auto& op : ops)
                if (detect_near_unanimity(op)) return verdict(member_nu(ops, r, v), out);
            return verdict(saturate_domain(r, ops).contains(v), out);
        }
        Relation r = boolean_of(raw);
        return verdict(member(CloneSpec{ops}, r, parse_bits(o.vector, r.width(), true)), out);
    }
    CloneId c = CloneId::parse(o.clone);
    Relation r = boolean_of(raw);
    BitVector v = parse_bits(o.vector, r.width(), true);
    return verdict(has_ud ? member_ud(c, r, parse_ud(o, r.width()), v) : member(c, r, v), out);
}

int cmd_extension(const Options& o, std::ostream& out) {
    RawRelation raw = load_raw(o);
    Relation r = boolean_of(raw);
    BitVector prefix = parse_bits(o.vector, r.width(), false);
    if (uses_ops(o)) return verdict(extension(CloneSpec{load_ops(o)}, r, prefix), out);
    return verdict(extension(CloneId::parse(o.clone), r, prefix), out);
}

int cmd_extremal(const Options& o, std::ostream& out) {
    const auto start = Clock::now();
    if (o.clone.empty()) throw UsageError("--clone is required");
    Side side = o.side == "max" ? Side::Max : Side::Min;
    Relation r = boolean_of(load_raw(o));
    auto s = extremal(CloneId::parse(o.clone), r, side);
    return emit(*s, o, out, start);
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const auto start = Clock::now();
    RawRelation raw = load_raw(o);
    const bool has_ud = !o.up.empty() || !o.down.empty();
    std::vector<OperationTable> ops = uses_ops(o) ? load_ops(o) : clone_base(CloneId::parse(o.clone));
    if (!boolean_ops(ops, raw)) {
        if (has_ud) throw UsageError("--up/--down need a boolean relation");
        ListStream<DomainVector> s(saturate_domain(domain_of(raw), ops).rows(), "saturation", false);
        return emit(s, o, out, start);
    }
    Relation r = boolean_of(raw);
    UDSpec ud = has_ud ? parse_ud(o, r.width()) : UDSpec{};
    Relation closed = saturate(r, ops, has_ud ? &ud : nullptr);
    ListStream<BitVector> s(closed.rows(), "saturation", false);
    return emit(s, o, out, start);
}

int cmd_classify(const Options& o, std::ostream& out) {
    if (o.ops.empty()) throw UsageError("--op is required");
    auto ops = load_ops(o);
    auto cls = classify_detailed(ops);
    if (!cls) {
        out << "unclassified" << std::endl;
        return False;
    }
    out << cls->clone.name() << '\n';
    out << "# dualized: " << (cls->dualized ? "yes" : "no") << '\n'
        << "# constants added:" << (cls->add_zero ? " 0" : "") << (cls->add_one ? " 1" : "")
        << (cls->add_zero || cls->add_one ? "" : " none") << '\n'
        << "# negation folded: " << (cls->fold_negation ? "yes" : "no") << '\n';
    if (!o.input.empty()) {
        Relation r = boolean_of(load_raw(o));
        ReducedInstance red = reduce_instance(CloneSpec{ops}, r);
        out << "# reduced clone: " << red.clone.name() << '\n';
        out << "# trace: " << (red.trace.empty() ? "none" : red.trace.describe()) << '\n';
        write_relation(out, red.relation);
    }
    out.flush();
    return Ok;
}

std::vector<std::size_t> sample(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

int gen_mondnf(const GenOptions& g, std::ostream& out) {
    CnfText f;
    if (!g.input.empty()) {
        f = with_file(g.input, [](std::istream& in) { return read_dimacs(in); });
        if (!f.dnf) throw UsageError("expected a \"p dnf\" formula");
        for (const auto& t : f.items)
            for (const auto& l : t)
                if (!l.positive) throw UsageError("formula is not monotone");
    } else {
        if (g.n == 0 || g.width == 0) throw UsageError("--n and --width must be positive");
        std::mt19937_64 rng(g.seed);
        std::uniform_int_distribution<std::size_t> size(1, std::min(g.width, g.n));
        f.n = g.n;
        f.dnf = true;
        for (std::size_t j = 0; j < g.m; ++j) {
            std::vector<Literal> term;
            for (std::size_t x : sample(rng, g.n, size(rng))) term.push_back({x, true});
            f.items.push_back(std::move(term));
        }
    }
    if (g.relation)
        write_relation(out, mondnf_to_e2_instance(f.items, f.n));
    else
        write_dimacs(out, f);
    out.flush();
    return Ok;
}

int gen_2cnf(const GenOptions& g, std::ostream& out) {
    if (g.n < 2) throw UsageError("--n must be at least 2");
    std::mt19937_64 rng(g.seed);
    std::bernoulli_distribution sign(0.5);
    CnfText f;
    f.n = g.n;
    for (std::size_t j = 0; j < g.m; ++j) {
        auto vars = sample(rng, g.n, 2);
        f.items.push_back({{vars[0], sign(rng)}, {vars[1], sign(rng)}});
    }
    write_dimacs(out, f);
    out.flush();
    return Ok;
}

int gen_relation(const GenOptions& g, std::ostream& out) {
    if (g.n == 0) throw UsageError("--n must be positive");
    if (g.density < 0 || g.density > 1) throw UsageError("--density must lie in [0,1]");
    std::mt19937_64 rng(g.seed);
    std::bernoulli_distribution bit(g.density);
    std::vector<BitVector> rows;
    for (std::size_t j = 0; j < g.m; ++j) {
        BitVector v(g.n);
        for (std::size_t i = 0; i < g.n; ++i)
            if (bit(rng)) v.set(i);
        rows.push_back(std::move(v));
    }
    write_relation(out, Relation(g.n, rows));
    out.flush();
    return Ok;
}

void add_common(CLI::App* sub, Options& o, bool stream) {
    sub->add_option("--clone", o.clone, "clone name: I2 E2 L0 L2 M2 BF R R0 S10 S12 D2 D1 S10^k S12^k");
    sub->add_option("--op", o.ops, "operation table file (repeatable); replaces --clone");
    sub->add_option("--input", o.input, "relation file (\"n m d\" header)");
    if (stream) {
        sub->add_option("--limit", o.limit, "stop after N solutions (0 = all)");
        sub->add_flag("--stats", o.stats, "append run statistics as '#' lines");
        sub->add_flag("--sorted", o.sorted, "collect and sort before printing");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closure membership and enumeration for boolean relations", "closure"};
    app.require_subcommand(1);
    Options o;
    GenOptions g;

    auto* enumerate_cmd = app.add_subcommand("enumerate", "stream every element of the closure");
    add_common(enumerate_cmd, o, true);
    enumerate_cmd->add_option("--up", o.up, "coordinates closed upward, e.g. 2,5");
    enumerate_cmd->add_option("--down", o.down, "coordinates closed downward");

    auto* member_cmd = app.add_subcommand("member", "decide whether --vector lies in the closure");
    add_common(member_cmd, o, false);
    member_cmd->add_option("--vector", o.vector, "digit string")->required();
    member_cmd->add_option("--up", o.up, "coordinates closed upward");
    member_cmd->add_option("--down", o.down, "coordinates closed downward");

    auto* extension_cmd = app.add_subcommand("extension", "decide whether --vector is a prefix of a closure element");
    add_common(extension_cmd, o, false);
    extension_cmd->add_option("--vector", o.vector, "0/1 prefix")->required();

    auto* extremal_cmd = app.add_subcommand("extremal", "maximal or minimal closure elements other than 0 and 1");
    add_common(extremal_cmd, o, true);
    extremal_cmd->add_option("--side", o.side, "max or min")->check(CLI::IsMember({"max", "min"}));

    auto* oracle_cmd = app.add_subcommand("oracle", "closure by naive saturation");
    add_common(oracle_cmd, o, true);
    oracle_cmd->add_option("--up", o.up, "coordinates closed upward");
    oracle_cmd->add_option("--down", o.down, "coordinates closed downward");

    auto* classify_cmd = app.add_subcommand("classify", "name the clone generated by operation tables");
    classify_cmd->add_option("--op", o.ops, "operation table file (repeatable)")->required();
    classify_cmd->add_option("--input", o.input, "relation to reduce for the classified clone");

    auto* gen_cmd = app.add_subcommand("gen", "random test instances");
    gen_cmd->require_subcommand(1);
    auto gen_common = [&](CLI::App* sub, const char* m_help) {
        sub->add_option("--n", g.n, "number of variables or columns");
        sub->add_option("--m", g.m, m_help);
        sub->add_option("--seed", g.seed, "random seed");
    };
    auto* gen_mondnf_cmd = gen_cmd->add_subcommand("mondnf", "monotone DNF");
    gen_common(gen_mondnf_cmd, "number of terms");
    gen_mondnf_cmd->add_option("--width", g.width, "largest term size");
    gen_mondnf_cmd->add_option("--input", g.input, "read a DNF instead of generating one");
    gen_mondnf_cmd->add_flag("--relation", g.relation, "print the E2 relation whose closure is the model set");
    auto* gen_2cnf_cmd = gen_cmd->add_subcommand("2cnf", "random 2CNF");
    gen_common(gen_2cnf_cmd, "number of clauses");
    auto* gen_relation_cmd = gen_cmd->add_subcommand("relation", "random boolean relation");
    gen_common(gen_relation_cmd, "number of rows");
    gen_relation_cmd->add_option("--density", g.density, "probability of a 1");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (*enumerate_cmd) return cmd_enumerate(o, out);
        if (*member_cmd) return cmd_member(o, out);
        if (*extension_cmd) return cmd_extension(o, out);
        if (*extremal_cmd) return cmd_extremal(o, out);
        if (*oracle_cmd) return cmd_oracle(o, out);
        if (*classify_cmd) return cmd_classify(o, out);
        if (*gen_mondnf_cmd) return gen_mondnf(g, out);
        if (*gen_2cnf_cmd) return gen_2cnf(g, out);
        if (*gen_relation_cmd) return gen_relation(g, out);
    } catch (const BudgetExhausted& e) {
        out.flush();
        err << "budget exhausted: " << e.what() << '\n';
        return Budget;
    } catch (const FileFormatError& e) {
        err << "format error: " << e.what() << '\n';
        return Usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Usage;
    }
    return Usage;
}

}  // namespace closure::cli
