#pragma once

#include <string>
#include <vector>

#include "qan/rational.hpp"

namespace qan {

// An NEC/Fuchsian signature (h; +/-; [m_1..m_r]; {(n_11..),(..)}).
// Canonical form: proper periods ascending, every period cycle stored as its
// least rotation-or-reversal, cycles sorted.
struct Signature {
    bool orientable = true;
    int genus = 0;
    std::vector<int> periods;
    std::vector<std::vector<int>> cycles;

    bool is_fuchsian() const { return orientable && cycles.empty(); }
    bool is_proper_nec() const { return !is_fuchsian(); }

    Signature canonical() const;
    bool is_canonical() const;

    // "(1;-;[2,4];{-})", "(0;+;[-];{(-),(2)})"
    std::string str() const;
    static Signature parse(const std::string& text);

    bool operator==(const Signature& o) const {
        return orientable == o.orientable && genus == o.genus && periods == o.periods &&
               cycles == o.cycles;
    }
    bool operator<(const Signature& o) const;
};

// mu(Delta)/2pi = eta*h + k - 2 + sum(1-1/m_i) + 1/2 sum sum(1-1/n_ij)
Rational reduced_area(const Signature& sig);

// an NEC group with this signature exists iff the reduced area is positive
bool exists(const Signature& sig);

// Signature of the canonical Fuchsian subgroup of a proper NEC group:
// genus eta*h + k - 1, each proper period doubled, each cycle period once.
// Throws NotProperNEC on Fuchsian input.
Signature canonical_fuchsian_signature(const Signature& sig);

enum class SurfaceKind { Riemann, Klein };

// Riemann: g = 1 + |G| * area / 2 (orientable surface kernel)
// Klein:   gamma = 2 + |G| * area (non-orientable topological genus)
// Throws NonIntegralGenus if the formula does not give an integer.
long long genus_from_action(const Signature& sig, long long group_order, SurfaceKind kind);

// ---------------------------------------------------------------------------
// Canonical presentation

enum class GenKind { Elliptic, Reflection, Boundary, HyperbolicA, HyperbolicB, Glide };

// word over presentation generators: (generator index, exponent) pairs
using Word = std::vector<std::pair<int, int>>;

struct Presentation {
    struct Gen {
        std::string label;
        GenKind kind;
        int orientation;  // -1 on reflections and glides, +1 otherwise
        int cycle = -1;   // owning period cycle, for reflections/boundary
        int pos = -1;     // position within its class
    };

    std::vector<Gen> gens;
    std::vector<Word> relations;                       // includes the long relation, once
    std::vector<std::pair<Word, int>> torsion;         // (word, exact order required)
    Signature sig;

    int gen_index(const std::string& label) const;
    std::string word_str(const Word& w) const;
    Word parse_word(const std::string& text) const;
};

// Generators and relations exactly as the canonical NEC presentation for the
// signature. Throws NonexistentSignature when reduced_area <= 0.
Presentation presentation_of(const Signature& sig);

// ---------------------------------------------------------------------------
// Enumeration

struct SignatureConstraints {
    Rational max_reduced_area;
    std::vector<int> allowed_periods;          // finite, all >= 2
    int sign_filter = 0;                       // 0 any, +1 orientable, -1 nonorientable
    bool allow_period_cycles = true;           // false: every cycle must be empty
    bool require_empty_boundary_quotient = false;  // true: no cycles at all (k = 0)
};

// Every canonical signature with 0 < reduced_area <= max_reduced_area and all
// periods in allowed_periods, duplicate-free, sorted. Complete for the given
// constraints.
std::vector<Signature> enumerate_signatures(const SignatureConstraints& c);

} // namespace qan
