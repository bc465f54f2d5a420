#pragma once

#include <map>
#include <string>
#include <vector>

#include "qan/epi.hpp"

namespace qan {

// A named generator-substitution rule on a canonical NEC presentation,
// transcribing an automorphism of the abstract group (like the paper's L and
// Q). Generators without an entry are fixed.
struct NecMove {
    std::string name;
    std::map<std::string, std::string> subs;  // generator label -> word
};

struct MoveSet {
    bool fuchsian_braids = false;
    std::vector<NecMove> nec_moves;

    std::string describe() const;

    static MoveSet aut_only() { return {}; }
    static MoveSet braids() { return {true, {}}; }
    // The automorphism L of Delta(1;-;[m1,m2]) used in the uniqueness proof of
    // the symmetric hyperbolic genus.
    static NecMove move_L();
    // The automorphism Q of Delta(1;-;[m1,m2,m3]) used in the pseudo-real
    // non-uniqueness proof.
    static NecMove move_Q();
    static MoveSet from_json_file(const std::string& path);
};

struct OrbitReport {
    int orbit_count = 0;
    std::vector<Epimorphism> representatives;  // lexicographically least per orbit, sorted
    std::vector<int> orbit_sizes;              // aligned with representatives
    std::string move_set_used;
    // names of Aut(G)-invariants that separate the orbits (lower-bound
    // evidence); empty when a single orbit or no separating invariant found
    std::vector<std::string> invariant_separators;
    // per-orbit value of the separating invariant, aligned with representatives
    std::vector<std::string> invariant_values;
};

// Orbits of the input under post-composition by Aut(G) and pre-composition by
// the moves. The input must be closed under both (it is whenever it is the
// complete result of an Aut-invariant search filter); a move or automorphism
// escaping the input raises MixedInputs / MoveNotAutomorphism. The orbit
// count is exact for the given move set and is an upper bound on the number
// of topological classes.
OrbitReport classify_orbits(const Presentation& pres, GroupPtr g,
                            const std::vector<Epimorphism>& epis,
                            const std::vector<Automorphism>& auts, const MoveSet& moves);

// Orbits under adjacent braid moves (g_i,g_{i+1}) -> (g_i g_{i+1} g_i^-1, g_i)
// at period-compatible positions, combined with Aut(G). Genus-0 Fuchsian only.
OrbitReport hurwitz_braid_closure(const Presentation& pres, GroupPtr g,
                                  const std::vector<Epimorphism>& epis,
                                  const std::vector<Automorphism>& auts);

} // namespace qan
