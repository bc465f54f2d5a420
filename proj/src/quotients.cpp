#include "qan/quotients.hpp"

#include <algorithm>
#include <map>

namespace qan {

long long FixedPointLedger::total_nontrivial() const {
    long long s = 0;
    for (long long c : counts) s += c;
    return s;
}

ConformalAction conformal_view(const ActionRecord& act) {
    if (!act.sig.is_fuchsian())
        fail(ErrorCode::NotConformalAction, "source " + act.sig.str() + " is not Fuchsian");
    ConformalAction ca;
    ca.group = act.target;
    ca.quotient_sig = act.sig;
    ca.surface_genus = act.genus;
    for (size_t i = 0; i < act.pres->gens.size(); i++)
        if (act.pres->gens[i].kind == GenKind::Elliptic)
            ca.elliptic_images.push_back(act.epi.images[i]);
    return ca;
}

ConformalAction restrict_to_plus_part(const ActionRecord& act) {
    if (act.kernel != KernelClassTag::RiemannWithAnticonformal)
        fail(ErrorCode::NotConformalAction,
             "restriction needs an orientable kernel with index-2 plus part");
    const GroupTable& g = *act.target;
    const Presentation& pres = *act.pres;

    Subgroup plus;
    plus.parent = act.target;
    plus.elements = act.plus_part;
    plus.gens = act.plus_part;
    std::vector<int> to_parent;
    GroupPtr hgroup = subgroup_as_group(plus, &to_parent);
    std::vector<int> back(g.order, -1);
    for (size_t i = 0; i < to_parent.size(); i++) back[to_parent[i]] = int(i);

    int n0 = -1;
    for (size_t i = 0; i < pres.gens.size(); i++)
        if (pres.gens[i].orientation < 0) {
            n0 = int(i);
            break;
        }
    std::vector<std::pair<int, int>> branch;  // (period, element of plus part)
    for (size_t i = 0; i < pres.gens.size(); i++)
        if (pres.gens[i].kind == GenKind::Elliptic) {
            int m = pres.sig.periods[pres.gens[i].pos];
            int im = act.epi.images[i];
            branch.push_back({m, im});
            branch.push_back({m, g.conj(im, act.epi.images[n0])});
        }
    for (const auto& [w, m] : pres.torsion)
        if (w.size() == 2) branch.push_back({m, eval_word(g, act.epi.images, w)});
    std::sort(branch.begin(), branch.end());

    ConformalAction ca;
    ca.group = hgroup;
    ca.quotient_sig = canonical_fuchsian_signature(act.sig);
    ca.surface_genus = act.genus;
    for (size_t i = 0; i < branch.size(); i++) {
        if (ca.quotient_sig.periods[i] != branch[i].first)
            fail(ErrorCode::InvalidSpec, "restricted branch data does not match " +
                                             ca.quotient_sig.str());
        int sub_ix = back[branch[i].second];
        if (sub_ix < 0)
            fail(ErrorCode::InvalidSpec, "branch stabilizer escapes the plus part");
        ca.elliptic_images.push_back(sub_ix);
    }
    if (genus_from_action(ca.quotient_sig, hgroup->order, SurfaceKind::Riemann) != act.genus)
        fail(ErrorCode::InvalidSpec, "restricted action genus mismatch");
    return ca;
}

FixedPointLedger fixed_point_ledger(const ConformalAction& act) {
    const GroupTable& g = *act.group;
    FixedPointLedger led;
    led.counts.assign(g.order, 0);
    for (int gi : act.elliptic_images) {
        // cosets k<g_i>: each is a point above this branch value, with
        // stabilizer k<g_i>k^-1
        std::vector<char> seen(g.order, 0);
        std::vector<int> cyc = closure(g, {gi});
        for (int k = 0; k < g.order; k++) {
            if (seen[k]) continue;
            for (int c : cyc) seen[g.mul(k, c)] = 1;
            for (int c : cyc) {
                int h = g.conj(c, k);
                if (h != g.identity) led.counts[h]++;
            }
        }
    }
    led.counts[g.identity] = 0;
    return led;
}

FixedPointLedger fixed_point_ledger(const ActionRecord& act) {
    return fixed_point_ledger(conformal_view(act));
}

bool is_purely_non_free(const ConformalAction& act) {
    FixedPointLedger led = fixed_point_ledger(act);
    for (int e = 0; e < act.group->order; e++)
        if (e != act.group->identity && led.counts[e] == 0) return false;
    return true;
}

bool is_purely_non_free(const ActionRecord& act) {
    return is_purely_non_free(conformal_view(act));
}

QuotientSignature quotient_signature(const ConformalAction& act, const Subgroup& h) {
    const GroupTable& g = *act.group;
    // right cosets Hk, acted on by right multiplication
    std::vector<int> coset_of(g.order, -1);
    int ncosets = 0;
    for (int e = 0; e < g.order; e++) {
        if (coset_of[e] >= 0) continue;
        for (int x : h.elements) coset_of[g.mul(x, e)] = ncosets;
        ncosets++;
    }
    std::vector<int> periods;
    for (size_t bi = 0; bi < act.elliptic_images.size(); bi++) {
        int gi = act.elliptic_images[bi];
        int m = act.quotient_sig.periods[bi];
        // orbits of <g_i> on the cosets; an orbit of length l is a point of
        // S/H with cone order m/l
        std::vector<int> perm(ncosets, -1);
        for (int e = 0; e < g.order; e++) perm[coset_of[e]] = coset_of[g.mul(e, gi)];
        std::vector<char> vis(ncosets, 0);
        for (int c = 0; c < ncosets; c++) {
            if (vis[c]) continue;
            int len = 0, cur = c;
            while (!vis[cur]) {
                vis[cur] = 1;
                cur = perm[cur];
                len++;
            }
            if (m % len != 0)
                fail(ErrorCode::InvalidSpec, "coset orbit length does not divide the period");
            if (m / len > 1) periods.push_back(m / len);
        }
    }
    std::sort(periods.begin(), periods.end());

    // genus from the Riemann-Hurwitz identity mu(Gamma_H) = [G:H] mu(Delta)
    Rational rhs = Rational(ncosets) * reduced_area(act.quotient_sig);
    Rational acc = rhs + Rational(2);
    for (int p : periods) acc -= Rational(p - 1, p);
    Rational genus2 = acc;  // = 2 g'
    if (!(genus2 / Rational(2)).is_integer())
        fail(ErrorCode::InvalidSpec, "quotient genus is not an integer");
    long long gq = (genus2 / Rational(2)).as_integer();
    if (gq < 0) fail(ErrorCode::InvalidSpec, "negative quotient genus");

    QuotientSignature qs;
    qs.subgroup = h;
    qs.signature.orientable = true;
    qs.signature.genus = int(gq);
    qs.signature.periods = periods;
    qs.genus = gq;

    // exact Riemann-Hurwitz closure for the cover S -> S/H
    Rational lhs(2 * act.surface_genus - 2);
    Rational cover = Rational((long long)h.elements.size()) * reduced_area(qs.signature);
    if (lhs != cover)
        fail(ErrorCode::InvalidSpec, "Riemann-Hurwitz does not close for quotient by subgroup of order " +
                                         std::to_string(h.elements.size()));
    return qs;
}

QuotientSignature quotient_signature(const ActionRecord& act, const Subgroup& h) {
    return quotient_signature(conformal_view(act), h);
}

bool hyperelliptic_within_group(const ConformalAction& act) {
    for (int t : act.group->involutions()) {
        Subgroup h = subgroup_generated(act.group, {t});
        if (quotient_signature(act, h).genus == 0) return true;
    }
    return false;
}

bool hyperelliptic_within_group(const ActionRecord& act) {
    return hyperelliptic_within_group(conformal_view(act));
}

KaniRosenReport kani_rosen_check(const ActionRecord& act) {
    ConformalAction ca = conformal_view(act);
    const GroupTable& g = *ca.group;
    int x, y;
    try {
        x = g.generator("x");
        y = g.generator("y");
    } catch (const Error&) {
        fail(ErrorCode::MissingSubgroupStructure, "target has no named generators x, y");
    }
    if (g.order_of(y) != 2)
        fail(ErrorCode::MissingSubgroupStructure, "generator y is not an involution");
    int t1 = g.pow(x, g.order_of(x) / 2);
    if (g.order_of(t1) != 2 || t1 == y)
        fail(ErrorCode::MissingSubgroupStructure, "central involution x^(ord/2) unavailable");
    int t3 = g.mul(y, t1);
    Subgroup v = subgroup_generated(ca.group, {t1, y});
    if (v.order() != 4)
        fail(ErrorCode::MissingSubgroupStructure, "<x^(ord/2), y> is not a Klein four-group");

    KaniRosenReport rep;
    rep.g_surface = ca.surface_genus;
    rep.g_sub[0] = quotient_signature(ca, subgroup_generated(ca.group, {t1})).genus;
    rep.g_sub[1] = quotient_signature(ca, subgroup_generated(ca.group, {y})).genus;
    rep.g_sub[2] = quotient_signature(ca, subgroup_generated(ca.group, {t3})).genus;
    rep.g_klein_four = quotient_signature(ca, v).genus;
    rep.holds = rep.g_klein_four == 0 && rep.g_sub[1] == rep.g_sub[2] &&
                rep.g_surface + 2 * rep.g_klein_four ==
                    rep.g_sub[0] + rep.g_sub[1] + rep.g_sub[2] &&
                rep.g_surface == rep.g_sub[0] + 2 * rep.g_sub[1];
    return rep;
}

} // namespace qan
