#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qan/error.hpp"

namespace qan {

struct GroupTable;
using GroupPtr = std::shared_ptr<const GroupTable>;

// Declarative description of a finite group. Five construction routes:
//   metacyclic   <s,t | s^m = 1, t^n = s^f, t s t^-1 = s^e>, elements s^i t^j
//   presentation abstract generators + relator words, resolved by coset enumeration
//   perms        permutations on {1..degree}
//   product      direct product of two specs
//   cyclic       C_m
struct GroupSpec {
    enum class Kind { Metacyclic, Presentation, Permutations, Product, Cyclic };

    Kind kind = Kind::Cyclic;

    // metacyclic
    long long m = 1, n = 1, f = 0, e = 1;
    std::string s_label = "a", t_label = "b";

    // presentation
    std::vector<std::string> gen_labels;
    std::vector<std::string> relators;
    long long coset_cap = 100000;

    // permutations (1-based images)
    int degree = 0;
    std::vector<std::vector<int>> perm_gens;
    std::vector<std::string> perm_labels;

    // product
    std::shared_ptr<GroupSpec> left, right;

    // cyclic
    long long order = 1;

    // Canonical text form, used for display and as the cache key.
    std::string canonical_text() const;

    // Accepts the built-in named specs ("QA:4", "K:5", "G1", "C:8", "CxC:4,2",
    // "Q8", "C2xQ8", "trivial") or an inline JSON object with a "kind" tag.
    static GroupSpec parse(const std::string& text);

    static GroupSpec qa(int n);      // QA_n, order 2^n, n >= 4
    static GroupSpec kn(int n);      // K_n, order 2^(n+1), n >= 4
    static GroupSpec g1();           // the order-32 group from the GAP computations
    static GroupSpec cyclic(long long m);
    static GroupSpec cxc(long long m, long long k);
    static GroupSpec q8();
    static GroupSpec product(GroupSpec a, GroupSpec b);
};

// A fully materialized finite group: dense element indices, O(1) multiplication.
struct GroupTable {
    int order = 1;
    int identity = 0;
    std::vector<uint16_t> mul_table;              // order x order, row-major
    std::vector<uint16_t> inv_table;
    std::vector<int> elt_order;
    std::vector<std::pair<std::string, int>> generators;  // label -> element
    std::vector<std::string> names;               // display word per element
    std::string spec_text;

    int mul(int a, int b) const { return mul_table[size_t(a) * order + b]; }
    int inv(int a) const { return inv_table[a]; }
    int conj(int a, int by) const { return mul(mul(by, a), inv(by)); }
    int pow(int a, long long k) const;
    int order_of(int a) const { return elt_order[a]; }

    int generator(const std::string& label) const;
    const std::string& name(int e) const { return names[e]; }

    std::vector<int> involutions() const;
    std::vector<int> elements_of_order(int m) const;
    std::vector<int> order_spectrum_set() const;  // sorted distinct orders

    // Full group-axiom check (associativity is O(order^3); fine for order <= 256).
    void check_axioms() const;
};

struct Subgroup {
    GroupPtr parent;
    std::vector<int> elements;   // sorted
    std::vector<int> gens;

    int order() const { return int(elements.size()); }
    bool contains(int e) const;
    bool operator==(const Subgroup& o) const { return elements == o.elements; }
    bool operator<(const Subgroup& o) const { return elements < o.elements; }
};

struct Automorphism {
    std::vector<uint16_t> images;
    int operator()(int e) const { return images[e]; }
    bool operator==(const Automorphism& o) const { return images == o.images; }
    bool operator<(const Automorphism& o) const { return images < o.images; }
};

struct GroupProfile {
    int order = 1;
    int exponent = 1;
    std::vector<std::pair<int, int>> order_spectrum;  // (element order, count)
    int involution_count = 0;
    Subgroup center;
    int conjugacy_class_count = 0;
    std::vector<std::vector<int>> conjugacy_classes;
    bool abelian = false;
};

GroupPtr materialize_group(const GroupSpec& spec);

GroupProfile group_profile(GroupPtr g);

// Exactly the kernels of surjections G -> C_2, via the mod-2 abelianization of
// the generating set; each subgroup is verified closed of index 2. Sorted by
// element list for deterministic output.
std::vector<Subgroup> index_two_subgroups(GroupPtr g);

// Complete automorphism list, found by enumerating images of the
// lexicographically least generating tuple of minimal size over
// order-compatible element tuples. Sorted by image vector.
std::vector<Automorphism> automorphism_group(const GroupTable& g, int cap = 256);

bool is_isomorphic(const GroupTable& g, const GroupTable& h, int cap = 256);

// True iff some automorphism maps (pair.first, pair.second) to the pair of
// inverses. The pair must generate G.
bool has_inverting_automorphism(const GroupTable& g, std::pair<int, int> pair);

Subgroup subgroup_generated(GroupPtr g, const std::vector<int>& gens);

std::vector<int> closure(const GroupTable& g, const std::vector<int>& gens);

// The whole subgroup lattice, by iterated one-generator extensions.
// Intended for tests and quotient sweeps at order <= 64.
std::vector<Subgroup> all_subgroups(GroupPtr g);

// A Subgroup re-indexed as a standalone GroupTable. to_parent maps the new
// element indices back into the parent group.
GroupPtr subgroup_as_group(const Subgroup& h, std::vector<int>* to_parent = nullptr);

// Parses a word over the group's named generators: "1", "x", "y*x^3", "a*b^-1".
int parse_element(const GroupTable& g, const std::string& word);

// G / <all squares> is elementary abelian of rank dim; coords[e] are the
// F_2-coordinates of the coset of e. A set generates G only if its coords
// span. Backs both the index-two enumeration and search pruning.
struct Mod2Quotient {
    int dim = 0;
    std::vector<uint32_t> coords;
};
Mod2Quotient mod2_quotient(const GroupTable& g);

// Lexicographically least generating tuple of minimal size.
std::vector<int> minimal_generating_tuple(const GroupTable& g);

// True iff H contains a subgroup isomorphic to G (G must be generated by at
// most 3 elements; exhaustive over generating tuples).
bool embeds(const GroupTable& g, const GroupTable& h);

} // namespace qan
