#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "closure/bitvector.hpp"
#include "closure/relation.hpp"

namespace closure {

BitVector BitVector::ones(std::size_t width) {
    BitVector v(width);
    v.fill();
    return v;
}

BitVector BitVector::unit(std::size_t width, std::size_t i) {
    BitVector v(width);
    v.set(i);
    return v;
}

BitVector BitVector::from_string(std::string_view s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') {
            v.set(i);
        } else if (s[i] != '0') {
            throw InvalidArgument("not a bit string: " + std::string(s));
        }
    }
    return v;
}

void BitVector::trim() {
    if (width_ % kWordBits != 0 && !words_.empty()) {
        words_.back() &= (word{1} << (width_ % kWordBits)) - 1;
    }
}

std::size_t BitVector::count() const {
    std::size_t c = 0;
    for (word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitVector::none() const {
    for (word w : words_)
        if (w) return false;
    return true;
}

bool BitVector::all() const { return count() == width_; }

std::size_t BitVector::find_next(std::size_t from) const {
    if (from >= width_) return width_;
    std::size_t wi = from >> 6;
    word w = words_[wi] & (~word{0} << (from & 63));
    while (true) {
        if (w) return std::min(width_, wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        if (++wi >= words_.size()) return width_;
        w = words_[wi];
    }
}

bool BitVector::is_subset_of(const BitVector& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

bool BitVector::intersects(const BitVector& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i]) return true;
    return false;
}

BitVector& BitVector::operator&=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}
BitVector& BitVector::operator|=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}
BitVector& BitVector::operator^=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}
BitVector& BitVector::and_not(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector r = *this;
    for (word& w : r.words_) w = ~w;
    r.trim();
    return r;
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

void BitVector::fill() {
    std::fill(words_.begin(), words_.end(), ~word{0});
    trim();
}

bool BitVector::operator<(const BitVector& o) const {
    if (width_ != o.width_) return width_ < o.width_;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        word x = words_[i] ^ o.words_[i];
        if (x) {
            word low = x & (~x + 1);
            return (o.words_[i] & low) != 0;
        }
    }
    return false;
}

std::string BitVector::to_string() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (test(i)) s[i] = '1';
    return s;
}

std::size_t BitVector::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ width_;
    for (word w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

std::vector<std::size_t> BitVector::ones_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = find_first(); i < width_; i = find_next(i + 1)) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------- IndexSet

IndexSet::IndexSet(std::size_t width, std::vector<std::size_t> members) : width_(width), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] < 1 || members_[i] > width_)
            throw InvalidArgument("index " + std::to_string(members_[i]) + " outside 1.." + std::to_string(width_));
        if (i > 0 && members_[i] == members_[i - 1])
            throw InvalidArgument("repeated index " + std::to_string(members_[i]));
    }
}

IndexSet IndexSet::full(std::size_t width) { return range(width, 1, width); }

IndexSet IndexSet::range(std::size_t width, std::size_t first, std::size_t last) {
    std::vector<std::size_t> m;
    for (std::size_t i = first; i <= last; ++i) m.push_back(i);
    return IndexSet(width, std::move(m));
}

bool IndexSet::contains(std::size_t i) const { return std::binary_search(members_.begin(), members_.end(), i); }

IndexSet IndexSet::compose(const IndexSet& inner) const {
    if (inner.width() != size()) throw InvalidArgument("compose: inner width must equal outer size");
    std::vector<std::size_t> m;
    for (std::size_t j : inner.members()) m.push_back(members_[j - 1]);
    return IndexSet(width_, std::move(m));
}

void UDSpec::validate(std::size_t width) const {
    if ((!up.empty() && up.width() != width) || (!down.empty() && down.width() != width))
        throw InvalidArgument("up/down index sets do not match the relation width");
    for (std::size_t i : up.members())
        if (down.contains(i)) throw InvalidArgument("coordinate " + std::to_string(i) + " is both up and down");
}

// ---------------------------------------------------------------- Relation

Relation::Relation(std::size_t width, const std::vector<BitVector>& rows) : width_(width) {
    for (const auto& v : rows) {
        if (v.width() != width) throw InvalidArgument("row width differs from relation width");
        if (index_.emplace(v, rows_.size()).second) rows_.push_back(v);
    }
    columns_.assign(width_, BitVector(rows_.size()));
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t c = rows_[r].find_first(); c < width_; c = rows_[r].find_next(c + 1)) columns_[c].set(r);
}

Relation Relation::from_strings(const std::vector<std::string>& rows) {
    std::vector<BitVector> v;
    std::size_t w = rows.empty() ? 0 : rows.front().size();
    for (const auto& s : rows) v.push_back(BitVector::from_string(s));
    return Relation(w, v);
}

bool Relation::contains(const BitVector& v) const { return index_.count(v) != 0; }

std::optional<std::size_t> Relation::index_of(const BitVector& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Relation::to_strings() const {
    std::vector<std::string> out;
    for (const auto& v : rows_) out.push_back(v.to_string());
    return out;
}

BitVector project(const BitVector& v, const IndexSet& I) {
    BitVector out(I.size());
    for (std::size_t j = 0; j < I.size(); ++j)
        if (v.test(I.members()[j] - 1)) out.set(j);
    return out;
}

Relation project(const Relation& r, const IndexSet& I) {
    if (I.width() != r.width()) throw InvalidArgument("projection index set width differs from relation width");
    std::vector<BitVector> rows;
    rows.reserve(r.size());
    for (const auto& v : r.rows()) rows.push_back(project(v, I));
    return Relation(I.size(), rows);
}

Relation complement_rows(const Relation& r) {
    std::vector<BitVector> rows;
    rows.reserve(r.size());
    for (const auto& v : r.rows()) rows.push_back(~v);
    return Relation(r.width(), rows);
}

std::vector<std::vector<std::size_t>> equal_column_classes(const Relation& r) {
    if (r.empty()) throw InvalidArgument("equal_column_classes needs at least one row");
    std::unordered_map<BitVector, std::size_t, BitVectorHash> seen;
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t c = 0; c < r.width(); ++c) {
        auto [it, fresh] = seen.emplace(r.column(c), classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(c + 1);
    }
    return classes;
}

BitVector intersection_of_all(const Relation& r) {
    BitVector acc = BitVector::ones(r.width());
    for (const auto& v : r.rows()) acc &= v;
    return acc;
}

BitVector union_of_all(const Relation& r) {
    BitVector acc(r.width());
    for (const auto& v : r.rows()) acc |= v;
    return acc;
}

// ------------------------------------------------------------------ text io

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        line = line.substr(first, line.find_last_not_of(" \t") - first + 1);
        return true;
    }
    return false;
}

RawRelation read_raw_relation(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_content_line(in, line, lineno)) throw FormatError(lineno + 1, "missing \"n m d\" header");
    std::istringstream hs(line);
    long long n = -1, m = -1, d = -1;
    std::string extra;
    if (!(hs >> n >> m >> d) || (hs >> extra)) throw FormatError(lineno, "header must be \"n m d\"");
    if (n < 1 || m < 0 || d < 2 || d > 10) throw FormatError(lineno, "header values out of range (n>=1, m>=0, 2<=d<=10)");
    RawRelation raw;
    raw.n = static_cast<std::size_t>(n);
    raw.d = static_cast<std::size_t>(d);
    for (long long k = 0; k < m; ++k) {
        if (!next_content_line(in, line, lineno)) throw FormatError(lineno + 1, "expected " + std::to_string(m) + " rows, got " + std::to_string(k));
        if (line.size() != raw.n) throw FormatError(lineno, "row has " + std::to_string(line.size()) + " digits, expected " + std::to_string(n));
        std::vector<unsigned char> row(raw.n);
        for (std::size_t i = 0; i < raw.n; ++i) {
            char ch = line[i];
            if (ch < '0' || ch > '9' || static_cast<std::size_t>(ch - '0') >= raw.d)
                throw FormatError(lineno, std::string("invalid digit '") + ch + "'");
            row[i] = static_cast<unsigned char>(ch - '0');
        }
        raw.rows.push_back(std::move(row));
    }
    if (next_content_line(in, line, lineno)) throw FormatError(lineno, "unexpected content after the declared rows");
    return raw;
}

Relation read_relation(std::istream& in) {
    RawRelation raw = read_raw_relation(in);
    if (raw.d != 2) throw UnsupportedDomain("boolean relation expected, header declares d=" + std::to_string(raw.d));
    std::vector<BitVector> rows;
    for (const auto& r : raw.rows) {
        BitVector v(raw.n);
        for (std::size_t i = 0; i < raw.n; ++i)
            if (r[i]) v.set(i);
        rows.push_back(v);
    }
    return Relation(raw.n, rows);
}

Relation read_relation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    return read_relation(in);
}

void write_relation(std::ostream& out, const Relation& r) {
    out << r.width() << ' ' << r.size() << " 2\n";
    for (const auto& v : r.rows()) out << v.to_string() << '\n';
}

}  // namespace closure
