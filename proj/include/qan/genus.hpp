#pragma once

#include <optional>
#include <string>

#include "qan/quotients.hpp"

namespace qan {

struct GenusKind {
    enum class Tag {
        StrongSymmetric,     // sigma^0: least genus of a conformal action
        PureSymmetric,       // sigma_p: conformal and purely-non-free
        SymmetricHyperbolic, // sigma^hyp(G, H): proper NEC, plus part = H
        StrongPseudoReal,    // psi*: sign '-', no cycles, plus part proper, admissible
        Crosscap,            // sigma~: plus part full, torsion-free kernel (Klein)
        SigmaPs,             // sigma_ps(G, L+): pseudo-real with plus part = L+
    };
    Tag tag = Tag::StrongSymmetric;
    Subgroup subgroup;  // for SymmetricHyperbolic and SigmaPs

    bool is_klein() const { return tag == Tag::Crosscap; }
    std::string name() const;
};

struct ExcludedGenus {
    long long genus = 0;
    std::string reason;  // no_smooth_epimorphism | fails_kind_filter | nonintegral_genus
};

struct GenusReport {
    GenusKind kind;
    long long value = 0;
    std::vector<ActionRecord> witnesses;  // all actions at the minimum
    Rational area_bound_used;
    long long signatures_examined = 0;
    long long signatures_with_actions = 0;
    std::vector<ExcludedGenus> excluded_minima;
    // per-witness: non-empty when the witness signature (its canonical
    // Fuchsian signature for NEC sources) matches the Singerman non-maximal
    // table, in which case full-automorphism-group claims need a maximality
    // choice of the NEC group
    std::vector<std::string> maximality_notes;
};

// Non-maximal Fuchsian signatures after Singerman; returns a description of
// the admissible extension when the signature matches the table.
std::optional<std::string> singerman_extension(const Signature& fuchsian_sig);

// Certified minimal genus: walks candidate genera upward from the floor,
// enumerating for each the complete set of signatures with the exact required
// reduced area (2(g-1)/|G| Riemann kinds, (g-2)/|G| Klein) over the group's
// order spectrum, and running the epimorphism search with the kind's filter.
// Every smaller genus is recorded in excluded_minima with its reason.
//
// Pseudo-real kinds additionally exclude witnesses on the signatures
// (1;-;[j,k]) and (2;-;[k]) whose theta-generating pair is inverted by an
// automorphism: such actions extend to a larger group with reflections, so
// the surface is not pseudo-real. (The two-glide pair for genus 2, glide and
// first elliptic for genus 1.)
GenusReport minimal_genus(GroupPtr g, const GenusKind& kind, long long genus_floor = -1);

struct PseudoRealCatalogResult {
    long long value = 0;
    std::string attained_by;  // "anticonformal" | "conformal_only"
    GenusReport anticonformal_report;                // psi*(G)
    std::vector<std::pair<std::string, long long>> conformal_branches;  // per (L, L+)
};

// psi(G) relative to a catalog of overgroups: min of psi*(G) and, for each
// overgroup L and index-2 subgroup L+ with an embedded copy of G,
// sigma_ps(L, L+).
PseudoRealCatalogResult pseudo_real_genus_with_catalog(GroupPtr g,
                                                       const std::vector<GroupSpec>& overgroups);

struct MaxOrderCheck {
    bool attained = false;
    std::optional<Signature> forced_signature;
};

// For odd g with 2g+2 = 2^n (n >= 4): does a pseudo-real QA_n-action attain
// order 2g+2 at genus g, and which single signature survives among all
// candidates with |QA_n| > 2(g-1)?
MaxOrderCheck max_pseudo_real_order_check(int g);

} // namespace qan
