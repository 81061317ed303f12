#include "closure/multidomain.hpp"

#include <unordered_set>

#include "closure/backtrack.hpp"

namespace closure {

namespace {

std::size_t nu_arity(const std::vector<OperationTable>& ops, std::size_t d) {
    std::size_t best = 0;
    for (const auto& op : ops) {
        if (op.domain_size() != d) throw InvalidArgument("operation domain differs from relation domain");
        if (detect_near_unanimity(op) && (best == 0 || op.arity() < best)) best = op.arity();
    }
    if (best == 0) throw Unsupported("no near-unanimity operation among the generators");
    return best;
}

std::string key_of(const DomainVector& v) { return std::string(v.begin(), v.end()); }

class NuStream final : public Backtrack<DomainVector> {
public:
    NuStream(WindowSystem ws, std::size_t rows)
        : Backtrack<DomainVector>("nu-windows", ws.width(), ws.domain_size()), ws_(std::move(ws)) {
        tick(ws_.window_count() * (rows + ws_.code_count()));
    }

protected:
    bool push(std::size_t l) override {
        std::uint64_t t = 0;
        bool ok = ws_.extend_ok(l, values_.data(), t);
        tick(t);
        return ok;
    }
    void output(DomainVector& out) override { out.assign(values_.begin(), values_.end()); }

private:
    WindowSystem ws_;
};

class AssocStream final : public DomainStream {
public:
    AssocStream(const OperationTable& f, const DomainRelation& r)
        : DomainStream("assoc-dfs", false), d_(r.domain_size()), rows_(r.rows()), table_(f.table()) {
        for (const auto& s : rows_)
            if (seen_.insert(key_of(s)).second) pending_.push_back(s);
        tick(rows_.size() * r.width());
    }

protected:
    bool produce(DomainVector& out) override {
        // rows come first, then the traversal emits each vector when discovered
        if (emitted_rows_ < pending_.size()) {
            out = pending_[emitted_rows_++];
            stack_.push_back({out, 0});
            return true;
        }
        while (!stack_.empty()) {
            Frame& top = stack_.back();
            if (top.next == rows_.size()) {
                stack_.pop_back();
                continue;
            }
            const DomainVector& s = rows_[top.next++];
            DomainVector w(top.v.size());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = table_[top.v[i] * d_ + s[i]];
            tick(w.size() + 1);
            if (!seen_.insert(key_of(w)).second) continue;
            out = w;
            stack_.push_back({std::move(w), 0});
            return true;
        }
        return false;
    }

private:
    struct Frame {
        DomainVector v;
        std::size_t next;
    };
    std::size_t d_;
    std::vector<DomainVector> rows_, pending_;
    std::vector<std::uint8_t> table_;
    std::unordered_set<std::string> seen_;
    std::vector<Frame> stack_;
    std::size_t emitted_rows_ = 0;
};

}  // namespace

bool detect_near_unanimity(const OperationTable& op) {
    const std::size_t k = op.arity(), d = op.domain_size();
    if (k < 3) return false;
    std::vector<std::uint8_t> args(k);
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y)
            for (std::size_t p = 0; p < k; ++p) {
                std::fill(args.begin(), args.end(), static_cast<std::uint8_t>(x));
                args[p] = static_cast<std::uint8_t>(y);
                if (op.eval(args) != x) return false;
            }
    return true;
}

bool is_associative(const OperationTable& f) {
    if (f.arity() != 2) return false;
    const std::size_t d = f.domain_size();
    auto at = [&](std::size_t a, std::size_t b) { return static_cast<std::size_t>(f.at(a * d + b)); };
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y)
            for (std::size_t z = 0; z < d; ++z)
                if (at(at(x, y), z) != at(x, at(y, z))) return false;
    return true;
}

WindowSystem nu_window_system(const std::vector<OperationTable>& ops, const DomainRelation& r) {
    const std::size_t d = r.domain_size();
    const std::size_t k = nu_arity(ops, d) - 1;
    if (r.empty()) throw InvalidArgument("nu_window_system needs a nonempty relation");
    return WindowSystem(r.width(), k, d, [&](const std::vector<std::size_t>& w) {
        std::size_t codes = 1;
        for (std::size_t i = 0; i < w.size(); ++i) codes *= d;
        WindowSystem::Mask m((codes + 63) / 64, 0);
        const DomainRelation local = saturate_domain(r.project(w), ops);
        for (const auto& v : local.rows()) {
            std::size_t code = 0;
            for (auto x : v) code = code * d + x;
            WindowSystem::mask_set(m, code);
        }
        return m;
    });
}

bool member_nu(const std::vector<OperationTable>& ops, const DomainRelation& r, const DomainVector& v) {
    if (v.size() != r.width()) throw InvalidArgument("vector width differs from relation width");
    for (auto x : v)
        if (x >= r.domain_size()) throw InvalidArgument("vector value outside the domain");
    nu_arity(ops, r.domain_size());
    if (r.empty()) return false;
    return nu_window_system(ops, r).contains(v.data());
}

DomainStreamPtr enum_nu(const std::vector<OperationTable>& ops, const DomainRelation& r) {
    nu_arity(ops, r.domain_size());
    if (r.empty()) return std::make_unique<ListStream<DomainVector>>(std::vector<DomainVector>{}, "nu-windows", true);
    return std::make_unique<NuStream>(nu_window_system(ops, r), r.size());
}

DomainStreamPtr enum_assoc(const OperationTable& f, const DomainRelation& r) {
    if (f.arity() != 2) throw InvalidArgument("enum_assoc needs a binary operation");
    if (f.domain_size() != r.domain_size()) throw InvalidArgument("operation domain differs from relation domain");
    if (!is_associative(f)) throw InvalidArgument("operation " + f.name() + " is not associative");
    return std::make_unique<AssocStream>(f, r);
}

Exact3CoverInstance encode_exact3cover(std::size_t n, const std::vector<IndexSet>& triples) {
    if (n == 0) throw InvalidArgument("exact cover needs a nonempty universe");
    std::vector<DomainVector> rows;
    for (const auto& t : triples) {
        if (t.width() != n) throw InvalidArgument("triple over a different universe");
        if (t.size() != 3) throw InvalidArgument("every set must have exactly 3 elements");
        DomainVector v(n, 0);
        for (std::size_t i : t.members()) v[i - 1] = 1;
        rows.push_back(std::move(v));
    }
    return {DomainRelation(n, 3, rows), ops::min_sum(3), DomainVector(n, 1)};
}

}  // namespace closure
