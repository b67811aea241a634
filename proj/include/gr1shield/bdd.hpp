#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace gr1shield::bdd {

class Manager;

/// Reference-counted handle to a node of a reduced ordered BDD. Nodes that
/// no live handle reaches are reclaimed by the manager's collector.
class Bdd {
public:
    Bdd() = default;
    Bdd(Manager* m, std::uint32_t node);
    Bdd(const Bdd& o);
    Bdd(Bdd&& o) noexcept;
    Bdd& operator=(const Bdd& o);
    Bdd& operator=(Bdd&& o) noexcept;
    ~Bdd();

    std::uint32_t node() const { return node_; }
    Manager* manager() const { return m_; }
    bool is_false() const { return node_ == 0; }
    bool is_true() const { return node_ == 1; }

    Bdd operator&(const Bdd& o) const;
    Bdd operator|(const Bdd& o) const;
    Bdd operator!() const;
    Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
    Bdd& operator|=(const Bdd& o) { return *this = *this | o; }
    bool operator==(const Bdd& o) const { return node_ == o.node_; }
    bool operator!=(const Bdd& o) const { return node_ != o.node_; }

private:
    Manager* m_ = nullptr;
    std::uint32_t node_ = 0;
};

class Manager {
public:
    explicit Manager(unsigned num_vars, std::size_t cache_bits = 20);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    unsigned num_vars() const { return num_vars_; }
    Bdd constant(bool v) { return Bdd(this, v ? 1u : 0u); }
    Bdd var(unsigned v);
    Bdd nvar(unsigned v);
    /// Conjunction of the positive literals of `vars`, used as a quantification set.
    Bdd cube(const std::vector<unsigned>& vars);

    Bdd conj(const Bdd& a, const Bdd& b);
    Bdd disj(const Bdd& a, const Bdd& b);
    Bdd negate(const Bdd& a);
    Bdd ite(const Bdd& c, const Bdd& t, const Bdd& e);
    Bdd implies(const Bdd& a, const Bdd& b) { return disj(negate(a), b); }
    Bdd iff(const Bdd& a, const Bdd& b);
    Bdd exists(const Bdd& f, const Bdd& cube);
    Bdd forall(const Bdd& f, const Bdd& cube);
    /// exists cube. (f & g), computed without building f & g.
    Bdd and_exists(const Bdd& f, const Bdd& g, const Bdd& cube);
    /// Substitutes variable v by map[v]. `map` must be strictly increasing on
    /// the support of f so the variable order is preserved.
    Bdd rename(const Bdd& f, const std::vector<unsigned>& map);

    /// Value of f under an assignment indexed by BDD variable.
    bool eval(const Bdd& f, const std::vector<bool>& assignment) const;
    bool eval(const Bdd& f, const std::function<bool(unsigned)>& value) const;
    /// Number of satisfying assignments over all num_vars() variables.
    double sat_count(const Bdd& f) const;
    /// Lowest satisfying assignment (false before true at every level); empty if f is false.
    std::vector<bool> pick_min(const Bdd& f) const;
    std::size_t node_count(const Bdd& f) const;
    /// Top variable of f (num_vars() for constants) and its cofactors.
    unsigned top_var(const Bdd& f) const { return nodes_[f.node()].var; }
    Bdd low(const Bdd& f) { return Bdd(this, nodes_[f.node()].lo); }
    Bdd high(const Bdd& f) { return Bdd(this, nodes_[f.node()].hi); }
    std::size_t live_nodes() const { return nodes_.size() - free_.size(); }

private:
    friend class Bdd;
    struct Node {
        std::uint32_t var;
        std::uint32_t lo;
        std::uint32_t hi;
        std::uint32_t next;  // unique-table chain
    };
    struct CacheEntry {
        std::uint32_t op = 0xffffffffu;
        std::uint32_t a = 0, b = 0, c = 0;
        std::uint32_t result = 0;
    };

    std::uint32_t make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
    std::uint32_t level(std::uint32_t n) const { return nodes_[n].var; }
    bool cache_get(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& out) const;
    void cache_put(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t r);
    void maybe_collect();
    void collect();
    void rehash(std::size_t buckets);

    std::uint32_t and_rec(std::uint32_t a, std::uint32_t b);
    std::uint32_t or_rec(std::uint32_t a, std::uint32_t b);
    std::uint32_t not_rec(std::uint32_t a);
    std::uint32_t ite_rec(std::uint32_t c, std::uint32_t t, std::uint32_t e);
    std::uint32_t exists_rec(std::uint32_t f, std::uint32_t cube);
    std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube);
    std::uint32_t rename_rec(std::uint32_t f, const std::vector<unsigned>& map, std::uint32_t tag);

    unsigned num_vars_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> refs_;
    std::vector<std::uint32_t> free_;
    std::vector<std::uint32_t> buckets_;
    std::vector<CacheEntry> cache_;
    std::size_t gc_threshold_ = 1u << 20;
    std::uint32_t rename_tag_ = 0;
};

}  // namespace gr1shield::bdd
