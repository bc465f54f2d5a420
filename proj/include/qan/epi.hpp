#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qan/group.hpp"
#include "qan/signature.hpp"

namespace qan {

// images[i] = target element assigned to presentation generator i
struct Epimorphism {
    std::vector<int> images;
    bool operator==(const Epimorphism& o) const { return images == o.images; }
    bool operator<(const Epimorphism& o) const { return images < o.images; }
};

enum class OrientationConstraint { None, PlusPartEquals, PlusPartProper, PlusPartFull };

struct SearchOptions {
    OrientationConstraint constraint = OrientationConstraint::None;
    std::vector<int> plus_part;   // sorted element list, for PlusPartEquals
    long long budget = -1;        // max search nodes, -1 = unlimited
};

struct SearchResult {
    std::vector<Epimorphism> epis;  // sorted lexicographically by images
    long long nodes = 0;
};

int eval_word(const GroupTable& g, const std::vector<int>& images, const Word& w);

// theta(Delta+): subgroup generated by the Reidemeister-Schreier images of the
// orientation-positive part. Returns the sorted element list (all of G when
// the presentation has no orientation-reversing generator).
std::vector<int> plus_part_image(const Presentation& pres, const GroupTable& g,
                                 const std::vector<int>& images);

// The complete, duplicate-free list of surface-kernel epimorphisms from the
// presented NEC group onto G subject to the orientation constraint:
// all relations map to 1, elliptic images keep their exact orders, reflection
// images are nontrivial involutions, consecutive-reflection products keep
// their exact cycle orders, and the images generate G.
//
// Pruned backtracking; the tree is partitioned at the first searched
// generator and partitions run in parallel (OpenMP). Deterministic output.
// Throws BudgetExceeded when a node budget is set and hit.
SearchResult smooth_epimorphisms(const Presentation& pres, GroupPtr g,
                                 const SearchOptions& opts = {});

// Serial reference: enumerates every |G|^#gens image tuple and verifies every
// constraint on each complete tuple. No pruning, no solving, no parallelism.
// Kept as the completeness oracle for the pruned search and for benchmarks.
SearchResult smooth_epimorphisms_reference(const Presentation& pres, GroupPtr g,
                                           const SearchOptions& opts = {});

enum class KernelClassTag { RiemannConformal, RiemannWithAnticonformal, KleinNonorientable };

const char* kernel_class_name(KernelClassTag t);

struct ActionRecord {
    Signature sig;
    std::shared_ptr<const Presentation> pres;
    GroupPtr target;
    Epimorphism epi;
    long long genus = 0;
    KernelClassTag kernel = KernelClassTag::RiemannConformal;
    std::vector<int> plus_part;        // sorted
    bool pseudo_real_admissible = false;
    std::optional<bool> purely_non_free;  // evaluated by quotients_fixedpoints
};

// Genus per kernel class (Riemann vs Klein formula), plus-part, and the
// pseudo-real admissibility flag (kernel orientable and no involution of G
// outside the plus part).
ActionRecord classify_action(const Presentation& pres, GroupPtr g, const Epimorphism& epi);

// Independent re-check of an epimorphism through the raw multiplication
// table; throws WitnessFails naming the violated constraint.
void check_epimorphism(const Presentation& pres, const GroupTable& g,
                       const std::vector<int>& images);

} // namespace qan
