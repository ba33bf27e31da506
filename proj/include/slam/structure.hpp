#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slam {

struct relation_symbol {
    std::string name;
    int arity = 1;

    bool operator==(const relation_symbol&) const = default;
};

// Ordered list of relation symbols with pairwise distinct names and arities >= 1.
class signature {
public:
    signature() = default;
    signature(std::initializer_list<relation_symbol> symbols);
    explicit signature(std::vector<relation_symbol> symbols);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    const relation_symbol& operator[](std::size_t i) const { return symbols_[i]; }
    auto begin() const { return symbols_.begin(); }
    auto end() const { return symbols_.end(); }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    int max_arity() const;

    bool operator==(const signature&) const = default;

private:
    std::vector<relation_symbol> symbols_;
};

// Sorted, duplicate-free set of tuples of a fixed arity, stored flat.
class relation {
public:
    explicit relation(int arity = 1) : arity_(arity) {}

    // Builds from an unsorted flat list (length a multiple of arity).
    static relation from_flat(int arity, std::vector<int> flat);

    int arity() const { return arity_; }
    std::size_t size() const { return arity_ ? data_.size() / arity_ : 0; }
    bool empty() const { return data_.empty(); }

    std::span<const int> operator[](std::size_t i) const {
        return {data_.data() + i * arity_, static_cast<std::size_t>(arity_)};
    }

    bool contains(std::span<const int> t) const;
    // Returns false if the tuple was already present.
    bool insert(std::span<const int> t);
    bool insert(std::initializer_list<int> t) { return insert(std::span<const int>(t.begin(), t.size())); }

    const std::vector<int>& flat() const { return data_; }

    class iterator {
    public:
        iterator(const relation* r, std::size_t i) : r_(r), i_(i) {}
        std::span<const int> operator*() const { return (*r_)[i_]; }
        iterator& operator++() { ++i_; return *this; }
        bool operator==(const iterator& o) const { return i_ == o.i_; }

    private:
        const relation* r_;
        std::size_t i_;
    };
    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, size()}; }

    bool operator==(const relation&) const = default;

private:
    std::size_t lower_bound(std::span<const int> t) const;

    int arity_;
    std::vector<int> data_;
};

// Finite relational structure over the domain 0..size-1.
class structure {
public:
    structure() = default;
    structure(signature sig, int size, std::string name = {});

    const signature& sig() const { return sig_; }
    int size() const { return size_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    const relation& rel(std::size_t i) const { return rels_[i]; }
    const relation& rel(std::string_view name) const { return rels_[sig_.index_of(name)]; }

    void add_tuple(std::size_t rel, std::span<const int> t);
    void add_tuple(std::size_t rel, std::initializer_list<int> t) {
        add_tuple(rel, std::span<const int>(t.begin(), t.size()));
    }
    void add_tuple(std::string_view rel, std::initializer_list<int> t) { add_tuple(sig_.index_of(rel), t); }
    void set_relation(std::size_t rel, relation r);

    std::size_t tuple_count() const;

    // Name is metadata and does not take part in equality.
    bool operator==(const structure& o) const {
        return size_ == o.size_ && sig_ == o.sig_ && rels_ == o.rels_;
    }

private:
    void check_tuple(std::size_t rel, std::span<const int> t) const;

    signature sig_;
    int size_ = 0;
    std::string name_;
    std::vector<relation> rels_;
};

structure disjoint_union(const structure& a, const structure& b);

// Substructure induced on `elements` (ascending); element i of the result is elements[i].
structure induced_substructure(const structure& s, const std::vector<int>& elements);

// Image of s under a map into 0..target_size-1: the relation tuples are mapped pointwise.
structure image_structure(const structure& s, const std::vector<int>& map, int target_size);

// Disjoint-set partition of 0..n-1.
class partition {
public:
    explicit partition(std::size_t n = 0);

    std::size_t size() const { return parent_.size(); }
    std::size_t find(std::size_t x);
    // Returns true when two classes were merged; the smaller index becomes the root.
    bool unite(std::size_t a, std::size_t b);
    bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

    // Class id per index, classes numbered by their smallest member.
    std::vector<int> class_ids();
    std::size_t class_count();

private:
    std::vector<std::size_t> parent_;
};

// Quotient s/~: classes become elements, a tuple of classes is related when some
// representatives are.
structure quotient(const structure& s, const std::vector<int>& class_of, int class_count);

struct query_atom {
    std::size_t symbol = 0;
    std::vector<int> args; // indices into conjunctive_query::vars

    bool operator==(const query_atom&) const = default;
};

// Conjunctive (primitive positive) query. vars[0..num_free) are the free variables
// in order, the remaining ones are existentially quantified.
struct conjunctive_query {
    signature sig;
    std::vector<std::string> vars;
    int num_free = 0;
    std::vector<query_atom> atoms;
    std::vector<std::pair<int, int>> equalities;

    int num_bound() const { return static_cast<int>(vars.size()) - num_free; }
    int var_index(std::string_view name) const;
    void validate() const;
};

struct canonical_db {
    structure db;
    std::vector<int> element_of; // per query variable
};

canonical_db canonical_database(const conjunctive_query& q);
conjunctive_query canonical_query(const structure& s);

// Bipartite occurrence graph; nodes 0..num_elements-1 are elements, the rest are
// tuple nodes listed in tuple_nodes.
struct incidence_graph {
    int num_elements = 0;
    std::vector<std::pair<std::size_t, std::size_t>> tuple_nodes; // (symbol, tuple index)
    std::vector<std::vector<int>> adjacency;

    std::size_t node_count() const { return adjacency.size(); }
    std::size_t edge_count() const;
    bool is_element(int node) const { return node < num_elements; }
};

incidence_graph make_incidence_graph(const structure& s);

struct shape_flags {
    bool injective = false;
    bool generalised_tree = false;
    bool tree = false;
    bool generalised_caterpillar = false;
    bool caterpillar = false;
    std::optional<int> girth; // absent when the incidence graph is acyclic
};

shape_flags shape_of(const structure& s);
std::optional<int> girth(const incidence_graph& g);

// Spine path witnessing the generalised caterpillar property, if any.
std::optional<std::vector<int>> caterpillar_spine(const incidence_graph& g);

struct unfolding {
    structure result;
    int a = -1, a_prime = -1, b = -1, b_prime = -1;
    std::vector<int> fold; // homomorphism result -> input
};

unfolding unfold(const structure& t, int a, int b);

// Line-oriented text format.
structure parse_structure(std::string_view text);
std::string print_structure(const structure& s);
structure read_structure_file(const std::string& path);

std::string read_text_file(const std::string& path); // "-" reads stdin

} // namespace slam
