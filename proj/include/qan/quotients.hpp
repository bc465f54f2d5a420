#pragma once

#include "qan/epi.hpp"

namespace qan {

// Branch data of a conformal action: the acting group, the Fuchsian quotient
// signature and one stabilizer generator per branch value (the image of the
// corresponding elliptic generator), aligned with the signature's periods.
struct ConformalAction {
    GroupPtr group;
    Signature quotient_sig;
    std::vector<int> elliptic_images;
    long long surface_genus = 0;
};

// View of a Fuchsian-source ActionRecord. Throws NotConformalAction otherwise.
ConformalAction conformal_view(const ActionRecord& act);

// The conformal part of a proper NEC action with orientable kernel: the
// plus-part subgroup acting with the canonical Fuchsian subgroup's signature.
// Branch stabilizers: each elliptic image together with its conjugate by the
// first orientation-reversing generator image, and one consecutive-reflection
// product per cycle period.
ConformalAction restrict_to_plus_part(const ActionRecord& act);

// counts[h] = number of fixed points of element h on the surface, computed by
// the coset scan: points above branch value i are the cosets k<g_i>, with
// stabilizer k<g_i>k^-1.
struct FixedPointLedger {
    std::vector<long long> counts;
    long long total_nontrivial() const;
};

FixedPointLedger fixed_point_ledger(const ConformalAction& act);
FixedPointLedger fixed_point_ledger(const ActionRecord& act);

bool is_purely_non_free(const ConformalAction& act);
bool is_purely_non_free(const ActionRecord& act);

struct QuotientSignature {
    Subgroup subgroup;
    Signature signature;  // Fuchsian
    long long genus = 0;
};

// Signature and genus of S/H by the coset-permutation method; Riemann-Hurwitz
// consistency is asserted in exact arithmetic.
QuotientSignature quotient_signature(const ConformalAction& act, const Subgroup& h);
QuotientSignature quotient_signature(const ActionRecord& act, const Subgroup& h);

// True iff some involution in the acting group has a genus-0 quotient. False
// means "not hyperelliptic via any involution visible in the group".
bool hyperelliptic_within_group(const ConformalAction& act);
bool hyperelliptic_within_group(const ActionRecord& act);

struct KaniRosenReport {
    bool holds = false;
    long long g_surface = 0;
    long long g_sub[3] = {0, 0, 0};  // quotients by <x^(ord/2)>, <y>, <y x^(ord/2)>
    long long g_klein_four = 0;      // quotient by the whole four-group
};

// Genus identity from the Kani-Rosen decomposition applied to the four-group
// <x^(ord(x)/2), y> of a target with named generators x, y:
//   g(S) + 2 g(S/V) = sum g(S/<t_i>)  and  g(S) = g(S/<t_1>) + 2 g(S/<t_2>),
// with g(S/V) = 0 and g(S/<t_2>) = g(S/<t_3>).
KaniRosenReport kani_rosen_check(const ActionRecord& act);

} // namespace qan
