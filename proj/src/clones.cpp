#include "closure/clones.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "closure/membership.hpp"
#include "closure/oracle.hpp"

namespace closure {

// ---------------------------------------------------------- OperationTable

OperationTable::OperationTable(std::size_t arity, std::size_t domain_size, std::vector<std::uint8_t> table, std::string name)
    : arity_(arity), d_(domain_size), table_(std::move(table)), name_(std::move(name)) {
    if (d_ < 2) throw InvalidArgument("operation domain size must be at least 2");
    std::size_t expected = 1;
    for (std::size_t i = 0; i < arity_; ++i) {
        expected *= d_;
        if (expected > (std::size_t{1} << 24)) throw InvalidArgument("operation table too large");
    }
    if (table_.size() != expected)
        throw InvalidArgument("operation table has " + std::to_string(table_.size()) + " entries, expected " + std::to_string(expected));
    for (auto x : table_)
        if (x >= d_) throw InvalidArgument("operation output outside the domain");

    // Symmetric iff invariant under every adjacent transposition.
    symmetric_ = true;
    std::vector<std::size_t> digits(arity_);
    for (std::size_t idx = 0; idx < table_.size() && symmetric_; ++idx) {
        std::size_t x = idx;
        for (std::size_t p = arity_; p-- > 0;) {
            digits[p] = x % d_;
            x /= d_;
        }
        for (std::size_t p = 0; p + 1 < arity_; ++p) {
            std::swap(digits[p], digits[p + 1]);
            std::size_t j = 0;
            for (std::size_t q = 0; q < arity_; ++q) j = j * d_ + digits[q];
            std::swap(digits[p], digits[p + 1]);
            if (table_[j] != table_[idx]) {
                symmetric_ = false;
                break;
            }
        }
    }
}

std::uint8_t OperationTable::eval(const std::vector<std::uint8_t>& args) const {
    if (args.size() != arity_) throw InvalidArgument("eval: expected " + std::to_string(arity_) + " arguments");
    std::size_t idx = 0;
    for (auto a : args) {
        if (a >= d_) throw InvalidArgument("eval: argument outside the domain");
        idx = idx * d_ + a;
    }
    return table_[idx];
}

BitVector OperationTable::apply(const std::vector<const BitVector*>& args) const {
    if (d_ != 2) throw UnsupportedDomain("apply on bit vectors needs a boolean operation");
    if (args.size() != arity_) throw InvalidArgument("apply: wrong number of arguments");
    if (arity_ == 0) throw InvalidArgument("apply: nullary operation has no width");
    const std::size_t width = args[0]->width();
    for (auto* a : args)
        if (a->width() != width) throw InvalidArgument("apply: argument widths differ");
    BitVector out(width);
    const std::size_t nw = out.num_words();
    for (std::size_t w = 0; w < nw; ++w) {
        BitVector::word acc = 0;
        for (std::size_t e = 0; e < table_.size(); ++e) {
            if (!table_[e]) continue;
            BitVector::word m = ~BitVector::word{0};
            for (std::size_t p = 0; p < arity_; ++p) {
                BitVector::word a = args[p]->word_at(w);
                m &= ((e >> (arity_ - 1 - p)) & 1U) ? a : ~a;
            }
            acc |= m;
        }
        out.word_at(w) = acc;
    }
    // clear padding bits beyond the width
    if (width % 64) out.word_at(nw - 1) &= (BitVector::word{1} << (width % 64)) - 1;
    return out;
}

OperationTable dualize(const OperationTable& op) {
    if (op.domain_size() != 2) throw UnsupportedDomain("dualize needs a boolean operation");
    const std::size_t size = op.table().size();
    std::vector<std::uint8_t> t(size);
    // complementing every argument flips every bit of the index
    for (std::size_t idx = 0; idx < size; ++idx) t[idx] = static_cast<std::uint8_t>(1 - op.table()[size - 1 - idx]);
    return OperationTable(op.arity(), 2, std::move(t), op.name().empty() ? std::string() : "dual(" + op.name() + ")");
}

OperationTable read_operation(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto content = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++lineno;
            auto f = out.find_first_not_of(" \t\r");
            if (f == std::string::npos || out[f] == '#') continue;
            return true;
        }
        return false;
    };
    if (!content(line)) throw FormatError(lineno + 1, "missing \"t d\" header");
    std::istringstream hs(line);
    long long t = -1, d = -1;
    if (!(hs >> t >> d) || t < 0 || d < 2 || d > 10) throw FormatError(lineno, "header must be \"t d\" with t>=0, 2<=d<=10");
    std::size_t expected = 1;
    for (long long i = 0; i < t; ++i) {
        expected *= static_cast<std::size_t>(d);
        if (expected > (std::size_t{1} << 24)) throw FormatError(lineno, "operation table too large");
    }
    std::vector<std::uint8_t> table;
    while (table.size() < expected && content(line)) {
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r') continue;
            if (c < '0' || c > '9' || c - '0' >= d) throw FormatError(lineno, std::string("invalid table digit '") + c + "'");
            table.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    if (table.size() != expected)
        throw FormatError(lineno, "table has " + std::to_string(table.size()) + " entries, expected " + std::to_string(expected));
    return OperationTable(static_cast<std::size_t>(t), static_cast<std::size_t>(d), std::move(table));
}

std::string describe(const OperationTable& op) {
    if (!op.name().empty()) return op.name();
    std::string s = std::to_string(op.arity()) + "-ary/" + std::to_string(op.domain_size()) + ":";
    for (auto x : op.table()) s.push_back(static_cast<char>('0' + x));
    return s;
}

namespace ops {

OperationTable from_function(std::size_t arity, std::size_t d, const std::function<std::uint8_t(const std::vector<std::uint8_t>&)>& f,
                             std::string name) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < arity; ++i) size *= d;
    std::vector<std::uint8_t> table(size);
    std::vector<std::uint8_t> args(arity);
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t x = idx;
        for (std::size_t p = arity; p-- > 0;) {
            args[p] = static_cast<std::uint8_t>(x % d);
            x /= d;
        }
        table[idx] = f(args);
    }
    return OperationTable(arity, d, std::move(table), std::move(name));
}

OperationTable and2() { return OperationTable(2, 2, {0, 0, 0, 1}, "and"); }
OperationTable or2() { return OperationTable(2, 2, {0, 1, 1, 1}, "or"); }
OperationTable not1() { return OperationTable(1, 2, {1, 0}, "not"); }
OperationTable xor2() { return OperationTable(2, 2, {0, 1, 1, 0}, "x+y"); }
OperationTable xor3() {
    return from_function(3, 2, [](const auto& a) { return static_cast<std::uint8_t>(a[0] ^ a[1] ^ a[2]); }, "x+y+z");
}
OperationTable maj() {
    return from_function(3, 2, [](const auto& a) { return static_cast<std::uint8_t>(a[0] + a[1] + a[2] >= 2); }, "maj");
}
OperationTable threshold(std::size_t k) {
    if (k < 2) throw InvalidArgument("threshold needs k >= 2");
    return from_function(
        k + 1, 2,
        [k](const auto& a) { return static_cast<std::uint8_t>(std::accumulate(a.begin(), a.end(), std::size_t{0}) >= k); },
        "Th" + std::to_string(k) + "^" + std::to_string(k + 1));
}
OperationTable ite() {
    return from_function(3, 2, [](const auto& a) { return a[0] ? a[1] : a[2]; }, "x?y:z");
}
OperationTable s10() {
    return from_function(3, 2, [](const auto& a) { return static_cast<std::uint8_t>(a[0] & (a[1] | a[2])); }, "x&(y|z)");
}
OperationTable s12() {
    return from_function(3, 2, [](const auto& a) { return static_cast<std::uint8_t>(a[0] & ((1 - a[1]) | a[2])); }, "x&(y->z)");
}
OperationTable constant(std::uint8_t value, std::size_t d) {
    return OperationTable(0, d, {value}, "const" + std::to_string(value));
}
OperationTable min_sum(std::size_t d) {
    return from_function(
        2, d, [d](const auto& a) { return static_cast<std::uint8_t>(std::min<std::size_t>(a[0] + a[1], d - 1)); },
        "min(x+y," + std::to_string(d - 1) + ")");
}

}  // namespace ops

// ----------------------------------------------------------------- CloneId

CloneId CloneId::parse(const std::string& name) {
    static const std::pair<const char*, CloneTag> plain[] = {
        {"I2", CloneTag::I2}, {"E2", CloneTag::E2}, {"L0", CloneTag::L0},   {"L2", CloneTag::L2},   {"M2", CloneTag::M2},
        {"BF", CloneTag::BF}, {"R", CloneTag::R},   {"R0", CloneTag::R0},   {"S10", CloneTag::S10}, {"S12", CloneTag::S12},
        {"D2", CloneTag::D2}, {"D1", CloneTag::D1},
    };
    for (const auto& [s, tag] : plain)
        if (name == s) return {tag, 0};
    for (const char* base : {"S10^", "S12^"}) {
        std::string b = base;
        if (name.size() > b.size() && name.compare(0, b.size(), b) == 0) {
            std::string num = name.substr(b.size());
            if (num.find_first_not_of("0123456789") != std::string::npos || num.size() > 3)
                throw InvalidArgument("bad hierarchy level in clone name " + name);
            std::size_t k = std::stoul(num);
            if (k < 2) throw InvalidArgument("hierarchy level must be at least 2: " + name);
            return {b == "S10^" ? CloneTag::S10K : CloneTag::S12K, k};
        }
    }
    throw InvalidArgument("unknown clone name: " + name);
}

std::string CloneId::name() const {
    switch (tag) {
        case CloneTag::I2: return "I2";
        case CloneTag::E2: return "E2";
        case CloneTag::L0: return "L0";
        case CloneTag::L2: return "L2";
        case CloneTag::M2: return "M2";
        case CloneTag::BF: return "BF";
        case CloneTag::R: return "R";
        case CloneTag::R0: return "R0";
        case CloneTag::S10: return "S10";
        case CloneTag::S12: return "S12";
        case CloneTag::S10K: return "S10^" + std::to_string(k);
        case CloneTag::S12K: return "S12^" + std::to_string(k);
        case CloneTag::D2: return "D2";
        case CloneTag::D1: return "D1";
    }
    return "?";
}

std::vector<OperationTable> clone_base(CloneId c) {
    switch (c.tag) {
        case CloneTag::I2: return {};
        case CloneTag::E2: return {ops::and2()};
        case CloneTag::L0: return {ops::xor2()};
        case CloneTag::L2: return {ops::xor3()};
        case CloneTag::M2: return {ops::or2(), ops::and2()};
        case CloneTag::BF: return {ops::or2(), ops::not1()};
        case CloneTag::R: return {ops::ite()};
        case CloneTag::R0: return {ops::or2(), ops::xor2()};
        case CloneTag::S10: return {ops::s10()};
        case CloneTag::S12: return {ops::s12()};
        case CloneTag::S10K:
            if (c.k < 2) throw InvalidArgument("S10^k needs k >= 2");
            if (c.k == 2) return {ops::maj(), ops::s10()};
            return {ops::threshold(c.k)};
        case CloneTag::S12K:
            if (c.k < 2) throw InvalidArgument("S12^k needs k >= 2");
            return {c.k == 2 ? ops::maj() : ops::threshold(c.k), ops::s12()};
        case CloneTag::D2: return {ops::maj()};
        case CloneTag::D1: return {ops::maj(), ops::xor3()};
    }
    return {};
}

std::vector<CloneId> registry(std::size_t k_max) {
    std::vector<CloneId> out = {{CloneTag::I2, 0}, {CloneTag::E2, 0},  {CloneTag::L0, 0},  {CloneTag::L2, 0}, {CloneTag::M2, 0},
                                {CloneTag::BF, 0}, {CloneTag::R, 0},   {CloneTag::R0, 0},  {CloneTag::S10, 0}, {CloneTag::S12, 0},
                                {CloneTag::D2, 0}, {CloneTag::D1, 0}};
    for (std::size_t k = 2; k <= k_max; ++k) {
        out.push_back(CloneId::s10k(k));
        out.push_back(CloneId::s12k(k));
    }
    return out;
}

std::size_t window_size(CloneId c) {
    switch (c.tag) {
        case CloneTag::D2:
        case CloneTag::D1:
        case CloneTag::M2:
        case CloneTag::BF:
        case CloneTag::R:
        case CloneTag::R0: return 2;
        case CloneTag::S10K:
        case CloneTag::S12K: return c.k;
        default: return 0;
    }
}

bool is_self_dual(CloneId c) {
    switch (c.tag) {
        case CloneTag::I2:
        case CloneTag::L2:
        case CloneTag::M2:
        case CloneTag::BF:
        case CloneTag::R:
        case CloneTag::D2:
        case CloneTag::D1: return true;
        default: return false;
    }
}

namespace {

// Rows pi_1..pi_t of width 2^t: the projections as truth tables.
std::vector<BitVector> projection_rows(std::size_t t) {
    const std::size_t w = std::size_t{1} << t;
    std::vector<BitVector> rows;
    for (std::size_t j = 0; j < t; ++j) {
        BitVector v(w);
        for (std::size_t e = 0; e < w; ++e)
            if ((e >> (t - 1 - j)) & 1U) v.set(e);
        rows.push_back(std::move(v));
    }
    return rows;
}

BitVector truth_vector(const OperationTable& f) {
    BitVector v(f.table().size());
    for (std::size_t e = 0; e < f.table().size(); ++e)
        if (f.at(e)) v.set(e);
    return v;
}

// Unary view of a nullary operation, so that constants are tested on the
// same footing as other functions.
OperationTable as_unary(const OperationTable& f) {
    if (f.arity() > 0) return f;
    return OperationTable(1, 2, {f.at(0), f.at(0)}, f.name());
}

// f in clone generated by C together with extra constants and, optionally,
// negation folded into the generators.
bool contains_with(CloneId c, const OperationTable& f0, bool add0, bool add1, bool fold) {
    OperationTable f = as_unary(f0);
    const std::size_t t = f.arity();
    std::vector<BitVector> rows = projection_rows(t);
    const std::size_t w = std::size_t{1} << t;
    if (add0) rows.emplace_back(w);
    if (add1) rows.push_back(BitVector::ones(w));
    if (fold) {
        const std::size_t base = rows.size();
        for (std::size_t i = 0; i < base; ++i) rows.push_back(~rows[i]);
    }
    Relation rel(w, rows);
    return make_decider(c, rel)->contains(truth_vector(f));
}

// Truth-table membership in the clone generated by a fixed operation set;
// the t-ary part of the clone is saturated once per arity.
class GeneratedClone {
public:
    explicit GeneratedClone(const std::vector<OperationTable>& gens) : gens_(gens) {}
    bool contains(const OperationTable& f0) {
        OperationTable f = as_unary(f0);
        const std::size_t t = f.arity();
        auto it = by_arity_.find(t);
        if (it == by_arity_.end())
            it = by_arity_.emplace(t, saturate(Relation(std::size_t{1} << t, projection_rows(t)), gens_)).first;
        return it->second.contains(truth_vector(f));
    }

private:
    const std::vector<OperationTable>& gens_;
    std::map<std::size_t, Relation> by_arity_;
};

}  // namespace

bool clone_contains(CloneId c, const OperationTable& f) {
    if (f.domain_size() != 2) throw UnsupportedDomain("clone membership is defined for boolean operations");
    return contains_with(c, f, false, false, false);
}

bool contains_constant(CloneId c, bool value) { return clone_contains(c, ops::constant(value ? 1 : 0)); }

std::optional<Classification> classify_detailed(const std::vector<OperationTable>& in, const ClassifyConfig& cfg) {
    for (const auto& op : in) {
        if (op.domain_size() != 2) throw UnsupportedDomain("classify handles boolean operations only");
        if (op.arity() > cfg.max_arity)
            throw Unsupported("operation " + describe(op) + " has arity " + std::to_string(op.arity()) + " above the limit " +
                              std::to_string(cfg.max_arity) + "; name the clone explicitly");
    }
    GeneratedClone generated(in);
    const bool has0 = generated.contains(ops::constant(0));
    const bool has1 = generated.contains(ops::constant(1));
    const bool hasneg = generated.contains(ops::not1());

    struct Candidate {
        Classification c;
        std::size_t steps;
    };
    std::vector<Candidate> valid;
    for (CloneId cid : registry(cfg.k_max)) {
        for (bool dual : {false, true}) {
            if (dual && is_self_dual(cid)) continue;
            // constants after the optional dualization
            const bool c0 = dual ? has1 : has0;
            const bool c1 = dual ? has0 : has1;
            const bool need0 = c0 && !contains_constant(cid, false);
            const bool need1 = c1 && !contains_constant(cid, true);
            const bool needneg = hasneg && !contains_with(cid, ops::not1(), need0, need1, false);
            if (needneg && !is_self_dual(cid)) continue;
            bool ok = true;
            for (const auto& op : in) {
                OperationTable f = dual ? dualize(op) : op;
                if (!contains_with(cid, f, need0, need1, needneg)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            // every generator of the candidate must be expressible from the input
            for (const auto& g : clone_base(cid)) {
                if (g.arity() > 3) continue;
                if (!generated.contains(dual ? dualize(g) : g)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            Classification cl;
            cl.clone = cid;
            cl.dualized = dual;
            cl.add_zero = dual ? need1 : need0;
            cl.add_one = dual ? need0 : need1;
            cl.fold_negation = needneg;
            valid.push_back({cl, static_cast<std::size_t>(dual) + need0 + need1 + needneg});
        }
    }
    if (valid.empty()) return std::nullopt;

    auto included = [](const Classification& a, const Classification& b) {
        for (const auto& g : clone_base(a.clone)) {
            OperationTable h = a.dualized ? dualize(g) : g;
            if (b.dualized) h = dualize(h);
            if (!clone_contains(b.clone, h)) return false;
        }
        return true;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < valid.size(); ++i) {
        const auto& a = valid[i];
        const auto& b = valid[best];
        if (a.steps < b.steps || (a.steps == b.steps && included(a.c, b.c) && !included(b.c, a.c))) best = i;
    }
    return valid[best].c;
}

std::optional<CloneId> classify(const std::vector<OperationTable>& ops, const ClassifyConfig& cfg) {
    auto c = classify_detailed(ops, cfg);
    if (!c) return std::nullopt;
    return c->clone;
}

// ---------------------------------------------------------- ReductionTrace

std::string step_name(StepKind k) {
    switch (k) {
        case StepKind::AddConstant0: return "AddConstant0";
        case StepKind::AddConstant1: return "AddConstant1";
        case StepKind::Dualize: return "Dualize";
        case StepKind::FoldNegation: return "FoldNegation";
        case StepKind::MergeEqualColumns: return "MergeEqualColumns";
        case StepKind::DropFreeColumn: return "DropFreeColumn";
    }
    return "?";
}

std::size_t ReductionTrace::fanout() const {
    std::size_t f = 1;
    for (const auto& s : steps_)
        if (s.kind == StepKind::DropFreeColumn) f *= 2;
    return f;
}

void ReductionTrace::lift(const BitVector& reduced, const std::function<void(const BitVector&)>& emit) const {
    std::vector<BitVector> cur{reduced}, next;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        next.clear();
        for (const auto& v : cur) {
            switch (it->kind) {
                case StepKind::Dualize: next.push_back(~v); break;
                case StepKind::MergeEqualColumns: {
                    std::size_t w = 0;
                    for (const auto& cls : it->partition) w += cls.size();
                    BitVector out(w);
                    for (std::size_t j = 0; j < it->partition.size(); ++j)
                        if (v.test(j))
                            for (std::size_t c : it->partition[j]) out.set(c - 1);
                    next.push_back(std::move(out));
                    break;
                }
                case StepKind::DropFreeColumn: {
                    BitVector out(v.width() + 1);
                    const std::size_t col = it->column - 1;
                    for (std::size_t i = 0; i < v.width(); ++i)
                        if (v.test(i)) out.set(i < col ? i : i + 1);
                    next.push_back(out);
                    out.set(col);
                    next.push_back(std::move(out));
                    break;
                }
                default: next.push_back(v); break;
            }
        }
        cur.swap(next);
    }
    for (const auto& v : cur) emit(v);
}

std::vector<BitVector> ReductionTrace::lift(const BitVector& reduced) const {
    std::vector<BitVector> out;
    lift(reduced, [&](const BitVector& v) { out.push_back(v); });
    return out;
}

std::optional<BitVector> ReductionTrace::reduce_vector(const BitVector& original) const {
    BitVector v = original;
    for (const auto& s : steps_) {
        switch (s.kind) {
            case StepKind::Dualize: v = ~v; break;
            case StepKind::MergeEqualColumns: {
                BitVector out(s.partition.size());
                for (std::size_t j = 0; j < s.partition.size(); ++j) {
                    const bool b = v.test(s.partition[j].front() - 1);
                    for (std::size_t c : s.partition[j])
                        if (v.test(c - 1) != b) return std::nullopt;
                    if (b) out.set(j);
                }
                v = std::move(out);
                break;
            }
            case StepKind::DropFreeColumn: {
                BitVector out(v.width() - 1);
                const std::size_t col = s.column - 1;
                for (std::size_t i = 0; i < v.width(); ++i)
                    if (i != col && v.test(i)) out.set(i < col ? i : i - 1);
                v = std::move(out);
                break;
            }
            default: break;
        }
    }
    return v;
}

std::string ReductionTrace::describe() const {
    std::string s;
    for (const auto& st : steps_) {
        if (!s.empty()) s += ", ";
        s += step_name(st.kind);
        if (st.kind == StepKind::DropFreeColumn) s += "(" + std::to_string(st.column) + ")";
        if (st.kind == StepKind::MergeEqualColumns) {
            s += "(";
            bool first = true;
            for (const auto& cls : st.partition) {
                if (cls.size() < 2) continue;
                if (!first) s += " ";
                first = false;
                s += "{";
                for (std::size_t i = 0; i < cls.size(); ++i) s += (i ? "," : "") + std::to_string(cls[i]);
                s += "}";
            }
            s += ")";
        }
    }
    return s;
}

ReducedInstance merge_equal_columns(CloneId c, const Relation& r, ReductionTrace trace) {
    if (r.empty()) return {c, r, std::move(trace)};
    auto classes = equal_column_classes(r);
    if (classes.size() == r.width()) return {c, r, std::move(trace)};
    std::vector<std::size_t> reps;
    for (const auto& cls : classes) reps.push_back(cls.front());
    Relation reduced = project(r, IndexSet(r.width(), reps));
    ReductionStep step{StepKind::MergeEqualColumns, std::move(classes), 0};
    trace.push(std::move(step));
    return {c, std::move(reduced), std::move(trace)};
}

ReducedInstance reduce_instance(const CloneSpec& spec, const Relation& r, const ClassifyConfig& cfg) {
    if (r.empty()) throw InvalidArgument("reduce_instance needs a nonempty relation");
    const std::size_t n = r.width();
    if (const CloneId* cid = std::get_if<CloneId>(&spec)) return merge_equal_columns(*cid, r, ReductionTrace(n));

    const auto& opsv = std::get<std::vector<OperationTable>>(spec);
    auto cls = classify_detailed(opsv, cfg);
    if (!cls) throw Unsupported("operations do not match any clone of the registry");
    ReductionTrace trace(n);
    std::vector<BitVector> rows = r.rows();
    if (cls->add_zero) {
        rows.emplace_back(n);
        trace.push({StepKind::AddConstant0, {}, 0});
    }
    if (cls->add_one) {
        rows.push_back(BitVector::ones(n));
        trace.push({StepKind::AddConstant1, {}, 0});
    }
    if (cls->dualized) {
        for (auto& v : rows) v = ~v;
        trace.push({StepKind::Dualize, {}, 0});
    }
    if (cls->fold_negation) {
        const std::size_t base = rows.size();
        for (std::size_t i = 0; i < base; ++i) rows.push_back(~rows[i]);
        trace.push({StepKind::FoldNegation, {}, 0});
    }
    return merge_equal_columns(cls->clone, Relation(n, rows), std::move(trace));
}

}  // namespace closure
