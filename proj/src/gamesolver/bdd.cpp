#include "gr1shield/bdd.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gr1shield::bdd {

namespace {

constexpr std::uint32_t kFreeVar = 0xfffffffeu;
constexpr std::uint32_t kNil = 0xffffffffu;

enum Op : std::uint32_t { OpAnd = 1, OpOr, OpNot, OpIte, OpExists, OpAndExists, OpRename };

inline std::size_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d = 0) {
    std::uint64_t h = a * 0x9e3779b97f4a7c15ull;
    h ^= b + 0xbf58476d1ce4e5b9ull + (h << 6) + (h >> 2);
    h ^= c * 0x94d049bb133111ebull + (h << 6) + (h >> 2);
    h ^= d + 0x2545f4914f6cdd1dull + (h << 6) + (h >> 2);
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
}

}  // namespace

Bdd::Bdd(Manager* m, std::uint32_t node) : m_(m), node_(node) {
    if (m_) ++m_->refs_[node_];
}
Bdd::Bdd(const Bdd& o) : m_(o.m_), node_(o.node_) {
    if (m_) ++m_->refs_[node_];
}
Bdd::Bdd(Bdd&& o) noexcept : m_(o.m_), node_(o.node_) { o.m_ = nullptr; }
Bdd& Bdd::operator=(const Bdd& o) {
    if (this == &o) return *this;
    if (o.m_) ++o.m_->refs_[o.node_];
    if (m_) --m_->refs_[node_];
    m_ = o.m_;
    node_ = o.node_;
    return *this;
}
Bdd& Bdd::operator=(Bdd&& o) noexcept {
    if (this == &o) return *this;
    if (m_) --m_->refs_[node_];
    m_ = o.m_;
    node_ = o.node_;
    o.m_ = nullptr;
    return *this;
}
Bdd::~Bdd() {
    if (m_) --m_->refs_[node_];
}

Bdd Bdd::operator&(const Bdd& o) const { return m_->conj(*this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return m_->disj(*this, o); }
Bdd Bdd::operator!() const { return m_->negate(*this); }

Manager::Manager(unsigned num_vars, std::size_t cache_bits) : num_vars_(num_vars) {
    nodes_.push_back({num_vars_, 0, 0, kNil});
    nodes_.push_back({num_vars_, 1, 1, kNil});
    refs_.assign(2, 1);
    rehash(1u << 16);
    cache_.resize(std::size_t{1} << cache_bits);
}

void Manager::rehash(std::size_t buckets) {
    buckets_.assign(buckets, kNil);
    const std::size_t mask = buckets - 1;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        Node& n = nodes_[i];
        if (n.var == kFreeVar) continue;
        std::size_t h = mix(n.var, n.lo, n.hi) & mask;
        n.next = buckets_[h];
        buckets_[h] = i;
    }
}

std::uint32_t Manager::make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    const std::size_t mask = buckets_.size() - 1;
    std::size_t h = mix(var, lo, hi) & mask;
    for (std::uint32_t i = buckets_[h]; i != kNil; i = nodes_[i].next) {
        const Node& n = nodes_[i];
        if (n.var == var && n.lo == lo && n.hi == hi) return i;
    }
    std::uint32_t idx;
    if (!free_.empty()) {
        idx = free_.back();
        free_.pop_back();
        nodes_[idx] = {var, lo, hi, buckets_[h]};
        refs_[idx] = 0;
    } else {
        if (nodes_.size() >= kFreeVar) throw std::length_error("BDD node table exhausted");
        idx = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({var, lo, hi, buckets_[h]});
        refs_.push_back(0);
    }
    buckets_[h] = idx;
    if (nodes_.size() > 2 * buckets_.size()) rehash(buckets_.size() * 2);
    return idx;
}

bool Manager::cache_get(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                        std::uint32_t& out) const {
    const CacheEntry& e = cache_[mix(op, a, b, c) & (cache_.size() - 1)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
        out = e.result;
        return true;
    }
    return false;
}

void Manager::cache_put(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t r) {
    cache_[mix(op, a, b, c) & (cache_.size() - 1)] = {op, a, b, c, r};
}

void Manager::maybe_collect() {
    if (live_nodes() < gc_threshold_) return;
    collect();
    if (live_nodes() > gc_threshold_ / 2) gc_threshold_ *= 2;
}

void Manager::collect() {
    std::vector<bool> mark(nodes_.size(), false);
    std::vector<std::uint32_t> stack;
    mark[0] = mark[1] = true;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i)
        if (refs_[i] > 0 && nodes_[i].var != kFreeVar) stack.push_back(i);
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (mark[n]) continue;
        mark[n] = true;
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    free_.clear();
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        if (!mark[i]) {
            nodes_[i].var = kFreeVar;
            free_.push_back(i);
        }
    }
    std::reverse(free_.begin(), free_.end());
    rehash(buckets_.size());
    std::fill(cache_.begin(), cache_.end(), CacheEntry{});
}

Bdd Manager::var(unsigned v) {
    if (v >= num_vars_) throw std::out_of_range("BDD variable out of range");
    return Bdd(this, make(v, 0, 1));
}

Bdd Manager::nvar(unsigned v) {
    if (v >= num_vars_) throw std::out_of_range("BDD variable out of range");
    return Bdd(this, make(v, 1, 0));
}

Bdd Manager::cube(const std::vector<unsigned>& vars) {
    std::vector<unsigned> sorted(vars);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::uint32_t acc = 1;
    for (unsigned v : sorted) acc = make(v, 0, acc);
    return Bdd(this, acc);
}

std::uint32_t Manager::and_rec(std::uint32_t a, std::uint32_t b) {
    if (a == 0 || b == 0) return 0;
    if (a == 1) return b;
    if (b == 1 || a == b) return a;
    if (a > b) std::swap(a, b);
    std::uint32_t r;
    if (cache_get(OpAnd, a, b, 0, r)) return r;
    const std::uint32_t la = level(a), lb = level(b), top = std::min(la, lb);
    const std::uint32_t a0 = la == top ? nodes_[a].lo : a, a1 = la == top ? nodes_[a].hi : a;
    const std::uint32_t b0 = lb == top ? nodes_[b].lo : b, b1 = lb == top ? nodes_[b].hi : b;
    std::uint32_t lo = and_rec(a0, b0);
    std::uint32_t hi = and_rec(a1, b1);
    r = make(top, lo, hi);
    cache_put(OpAnd, a, b, 0, r);
    return r;
}

std::uint32_t Manager::or_rec(std::uint32_t a, std::uint32_t b) {
    if (a == 1 || b == 1) return 1;
    if (a == 0) return b;
    if (b == 0 || a == b) return a;
    if (a > b) std::swap(a, b);
    std::uint32_t r;
    if (cache_get(OpOr, a, b, 0, r)) return r;
    const std::uint32_t la = level(a), lb = level(b), top = std::min(la, lb);
    const std::uint32_t a0 = la == top ? nodes_[a].lo : a, a1 = la == top ? nodes_[a].hi : a;
    const std::uint32_t b0 = lb == top ? nodes_[b].lo : b, b1 = lb == top ? nodes_[b].hi : b;
    std::uint32_t lo = or_rec(a0, b0);
    std::uint32_t hi = or_rec(a1, b1);
    r = make(top, lo, hi);
    cache_put(OpOr, a, b, 0, r);
    return r;
}

std::uint32_t Manager::not_rec(std::uint32_t a) {
    if (a < 2) return 1 - a;
    std::uint32_t r;
    if (cache_get(OpNot, a, 0, 0, r)) return r;
    const Node n = nodes_[a];
    std::uint32_t lo = not_rec(n.lo);
    std::uint32_t hi = not_rec(n.hi);
    r = make(n.var, lo, hi);
    cache_put(OpNot, a, 0, 0, r);
    return r;
}

std::uint32_t Manager::ite_rec(std::uint32_t c, std::uint32_t t, std::uint32_t e) {
    if (c == 1) return t;
    if (c == 0) return e;
    if (t == e) return t;
    if (t == 1 && e == 0) return c;
    if (t == 0 && e == 1) return not_rec(c);
    if (t == 1) return or_rec(c, e);
    if (e == 0) return and_rec(c, t);
    std::uint32_t r;
    if (cache_get(OpIte, c, t, e, r)) return r;
    const std::uint32_t top = std::min({level(c), level(t), level(e)});
    auto cof = [&](std::uint32_t x, bool hi) {
        if (level(x) != top) return x;
        return hi ? nodes_[x].hi : nodes_[x].lo;
    };
    std::uint32_t lo = ite_rec(cof(c, false), cof(t, false), cof(e, false));
    std::uint32_t hi = ite_rec(cof(c, true), cof(t, true), cof(e, true));
    r = make(top, lo, hi);
    cache_put(OpIte, c, t, e, r);
    return r;
}

std::uint32_t Manager::exists_rec(std::uint32_t f, std::uint32_t cube) {
    if (f < 2) return f;
    while (cube != 1 && level(cube) < level(f)) cube = nodes_[cube].hi;
    if (cube == 1) return f;
    std::uint32_t r;
    if (cache_get(OpExists, f, cube, 0, r)) return r;
    const Node n = nodes_[f];
    if (level(cube) == n.var) {
        const std::uint32_t rest = nodes_[cube].hi;
        std::uint32_t lo = exists_rec(n.lo, rest);
        if (lo == 1) {
            r = 1;
        } else {
            std::uint32_t hi = exists_rec(n.hi, rest);
            r = or_rec(lo, hi);
        }
    } else {
        std::uint32_t lo = exists_rec(n.lo, cube);
        std::uint32_t hi = exists_rec(n.hi, cube);
        r = make(n.var, lo, hi);
    }
    cache_put(OpExists, f, cube, 0, r);
    return r;
}

std::uint32_t Manager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube) {
    if (f == 0 || g == 0) return 0;
    if (f == 1 && g == 1) return 1;
    if (f == 1) return exists_rec(g, cube);
    if (g == 1 || f == g) return exists_rec(f, cube);
    if (f > g) std::swap(f, g);
    const std::uint32_t lf = level(f), lg = level(g), top = std::min(lf, lg);
    while (cube != 1 && level(cube) < top) cube = nodes_[cube].hi;
    if (cube == 1) return and_rec(f, g);
    std::uint32_t r;
    if (cache_get(OpAndExists, f, g, cube, r)) return r;
    const std::uint32_t f0 = lf == top ? nodes_[f].lo : f, f1 = lf == top ? nodes_[f].hi : f;
    const std::uint32_t g0 = lg == top ? nodes_[g].lo : g, g1 = lg == top ? nodes_[g].hi : g;
    if (level(cube) == top) {
        const std::uint32_t rest = nodes_[cube].hi;
        std::uint32_t lo = and_exists_rec(f0, g0, rest);
        if (lo == 1) {
            r = 1;
        } else {
            std::uint32_t hi = and_exists_rec(f1, g1, rest);
            r = or_rec(lo, hi);
        }
    } else {
        std::uint32_t lo = and_exists_rec(f0, g0, cube);
        std::uint32_t hi = and_exists_rec(f1, g1, cube);
        r = make(top, lo, hi);
    }
    cache_put(OpAndExists, f, g, cube, r);
    return r;
}

std::uint32_t Manager::rename_rec(std::uint32_t f, const std::vector<unsigned>& map, std::uint32_t tag) {
    if (f < 2) return f;
    std::uint32_t r;
    if (cache_get(OpRename, f, tag, 0, r)) return r;
    const Node n = nodes_[f];
    std::uint32_t lo = rename_rec(n.lo, map, tag);
    std::uint32_t hi = rename_rec(n.hi, map, tag);
    const std::uint32_t v = map[n.var];
    if (v >= level(lo) || v >= level(hi)) throw std::logic_error("BDD rename does not preserve the variable order");
    r = make(v, lo, hi);
    cache_put(OpRename, f, tag, 0, r);
    return r;
}

Bdd Manager::conj(const Bdd& a, const Bdd& b) {
    maybe_collect();
    return Bdd(this, and_rec(a.node(), b.node()));
}

Bdd Manager::disj(const Bdd& a, const Bdd& b) {
    maybe_collect();
    return Bdd(this, or_rec(a.node(), b.node()));
}

Bdd Manager::negate(const Bdd& a) {
    maybe_collect();
    return Bdd(this, not_rec(a.node()));
}

Bdd Manager::ite(const Bdd& c, const Bdd& t, const Bdd& e) {
    maybe_collect();
    return Bdd(this, ite_rec(c.node(), t.node(), e.node()));
}

Bdd Manager::iff(const Bdd& a, const Bdd& b) {
    maybe_collect();
    std::uint32_t nb = not_rec(b.node());
    return Bdd(this, ite_rec(a.node(), b.node(), nb));
}

Bdd Manager::exists(const Bdd& f, const Bdd& cube) {
    maybe_collect();
    return Bdd(this, exists_rec(f.node(), cube.node()));
}

Bdd Manager::forall(const Bdd& f, const Bdd& cube) {
    maybe_collect();
    std::uint32_t nf = not_rec(f.node());
    std::uint32_t e = exists_rec(nf, cube.node());
    return Bdd(this, not_rec(e));
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, const Bdd& cube) {
    maybe_collect();
    return Bdd(this, and_exists_rec(f.node(), g.node(), cube.node()));
}

Bdd Manager::rename(const Bdd& f, const std::vector<unsigned>& map) {
    maybe_collect();
    if (map.size() < num_vars_) throw std::invalid_argument("BDD rename map too short");
    std::vector<unsigned> full(map.begin(), map.end());
    full.push_back(num_vars_);
    return Bdd(this, rename_rec(f.node(), full, ++rename_tag_));
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) const {
    std::uint32_t n = f.node();
    while (n >= 2) n = assignment[nodes_[n].var] ? nodes_[n].hi : nodes_[n].lo;
    return n == 1;
}

bool Manager::eval(const Bdd& f, const std::function<bool(unsigned)>& value) const {
    std::uint32_t n = f.node();
    while (n >= 2) n = value(nodes_[n].var) ? nodes_[n].hi : nodes_[n].lo;
    return n == 1;
}

double Manager::sat_count(const Bdd& f) const {
    std::unordered_map<std::uint32_t, double> memo;
    std::function<double(std::uint32_t)> frac = [&](std::uint32_t n) -> double {
        if (n < 2) return n;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        double v = 0.5 * (frac(nodes_[n].lo) + frac(nodes_[n].hi));
        memo.emplace(n, v);
        return v;
    };
    double scale = 1.0;
    for (unsigned i = 0; i < num_vars_; ++i) scale *= 2.0;
    return frac(f.node()) * scale;
}

std::vector<bool> Manager::pick_min(const Bdd& f) const {
    if (f.is_false()) return {};
    std::vector<bool> out(num_vars_, false);
    std::uint32_t n = f.node();
    while (n >= 2) {
        if (nodes_[n].lo != 0) {
            n = nodes_[n].lo;
        } else {
            out[nodes_[n].var] = true;
            n = nodes_[n].hi;
        }
    }
    return out;
}

std::size_t Manager::node_count(const Bdd& f) const {
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{f.node()};
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (n < 2 || !seen.insert(n).second) continue;
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    return seen.size();
}

}  // namespace gr1shield::bdd
