#include "qan/genus.hpp"

#include <algorithm>
#include <sstream>

namespace qan {

std::string GenusKind::name() const {
    switch (tag) {
        case Tag::StrongSymmetric: return "strong_symmetric";
        case Tag::PureSymmetric: return "pure_symmetric";
        case Tag::SymmetricHyperbolic: return "symmetric_hyperbolic";
        case Tag::StrongPseudoReal: return "strong_pseudo_real";
        case Tag::Crosscap: return "crosscap";
        case Tag::SigmaPs: return "sigma_ps";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Singerman table

std::optional<std::string> singerman_extension(const Signature& s) {
    if (!s.is_fuchsian()) return std::nullopt;
    const auto& p = s.periods;
    auto sig_text = [](int a, int b, int c) {
        std::ostringstream os;
        os << "(0;+;[" << a << "," << b << "," << c << "];{-})";
        return os.str();
    };
    if (s.genus == 2 && p.empty()) return "(0;+;[2,2,2,2,2,2];{-}) index 2";
    if (s.genus == 1 && p.size() == 2 && p[0] == p[1])
        return "(0;+;[2,2,2,2," + std::to_string(p[0]) + "];{-}) index 2";
    if (s.genus == 1 && p.size() == 1)
        return "(0;+;[2,2,2," + std::to_string(2 * p[0]) + "];{-}) index 2";
    if (s.genus != 0) return std::nullopt;
    if (p.size() == 4) {
        if (p[0] == p[1] && p[1] == p[2] && p[2] == p[3])
            return "(0;+;[2,2,2," + std::to_string(p[0]) + "];{-}) index 4";
        if (p[0] == p[1] && p[2] == p[3])
            return "(0;+;[2,2," + std::to_string(p[0]) + "," + std::to_string(p[2]) +
                   "];{-}) index 2";
        return std::nullopt;
    }
    if (p.size() != 3) return std::nullopt;
    int a = p[0], b = p[1], c = p[2];  // ascending
    // normal families
    if (a == b && b == c) return sig_text(3, 3, a) + " index 3 (and " + sig_text(2, 3, 2 * a) + ")";
    if (b == c) return sig_text(2, b, 2 * a) + " index 2";
    if (a == b) return sig_text(2, a, 2 * c) + " index 2";
    // non-normal sporadic / parametric families
    if (a == 2 && c == 2 * b) return sig_text(2, 3, 2 * b) + " index 3";
    if (a == 3 && c == 3 * b) return sig_text(2, 3, 3 * b) + " index 4";
    if (2 * a == c && b == c) return sig_text(2, 4, c) + " index 4";     // (t,2t,2t)
    if (4 * a == c && b == c) return sig_text(2, 3, c) + " index 6";     // (t,4t,4t)
    if (a == 2 && b == 7 && c == 7) return sig_text(2, 3, 7) + " index 9";
    if (a == 3 && b == 3 && c == 7) return sig_text(2, 3, 7) + " index 8";
    if (a == 4 && b == 8 && c == 8) return sig_text(2, 3, 8) + " index 12";
    if (a == 3 && b == 8 && c == 8) return sig_text(2, 3, 8) + " index 10";
    if (a == 9 && b == 9 && c == 9) return sig_text(2, 3, 9) + " index 12";
    if (a == 4 && b == 4 && c == 5) return sig_text(2, 4, 5) + " index 6";
    if (a == 7 && b == 7 && c == 7) return sig_text(2, 3, 7) + " index 24";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Kind filters

namespace {

struct KindMachinery {
    GroupPtr g;
    const GenusKind& kind;
    SignatureConstraints shape;
    SearchOptions opts;

    KindMachinery(GroupPtr g_, const GenusKind& k) : g(g_), kind(k) {
        shape.allowed_periods = g->order_spectrum_set();
        shape.allowed_periods.erase(
            std::remove(shape.allowed_periods.begin(), shape.allowed_periods.end(), 1),
            shape.allowed_periods.end());
        switch (kind.tag) {
            case GenusKind::Tag::StrongSymmetric:
            case GenusKind::Tag::PureSymmetric:
                shape.sign_filter = +1;
                shape.require_empty_boundary_quotient = true;
                opts.constraint = OrientationConstraint::None;
                break;
            case GenusKind::Tag::SymmetricHyperbolic:
                shape.sign_filter = 0;
                opts.constraint = OrientationConstraint::PlusPartEquals;
                opts.plus_part = kind.subgroup.elements;
                break;
            case GenusKind::Tag::StrongPseudoReal:
                shape.sign_filter = -1;
                shape.require_empty_boundary_quotient = true;
                opts.constraint = OrientationConstraint::PlusPartProper;
                break;
            case GenusKind::Tag::SigmaPs:
                shape.sign_filter = -1;
                shape.require_empty_boundary_quotient = true;
                opts.constraint = OrientationConstraint::PlusPartEquals;
                opts.plus_part = kind.subgroup.elements;
                break;
            case GenusKind::Tag::Crosscap:
                shape.sign_filter = 0;
                opts.constraint = OrientationConstraint::PlusPartFull;
                break;
        }
    }

    bool shape_admits(const Signature& s) const {
        switch (kind.tag) {
            case GenusKind::Tag::StrongSymmetric:
            case GenusKind::Tag::PureSymmetric:
                return s.is_fuchsian();
            default:
                return s.is_proper_nec();
        }
    }

    bool pseudo_real_kind() const {
        return kind.tag == GenusKind::Tag::StrongPseudoReal ||
               kind.tag == GenusKind::Tag::SigmaPs;
    }

    // The theta-generating pair of the small non-orientable shapes whose
    // pseudo-real actions always extend when the pair is inverted by an
    // automorphism (the quotient orbifold admits an extra reflection).
    std::optional<std::pair<int, int>> extension_pair(const Presentation& pres,
                                                      const Epimorphism& epi) const {
        const Signature& s = pres.sig;
        if (s.orientable || !s.cycles.empty()) return std::nullopt;
        if (s.genus == 1 && s.periods.size() == 2)
            return std::make_pair(epi.images[pres.gen_index("d1")],
                                  epi.images[pres.gen_index("x1")]);
        if (s.genus == 2 && s.periods.size() == 1)
            return std::make_pair(epi.images[pres.gen_index("d1")],
                                  epi.images[pres.gen_index("d2")]);
        return std::nullopt;
    }

    // full kind filter on a classified action; assumes the orientation
    // constraint already held in the search
    bool keep(const ActionRecord& act, const Presentation& pres, const Epimorphism& epi) const {
        switch (kind.tag) {
            case GenusKind::Tag::StrongSymmetric:
                return true;
            case GenusKind::Tag::PureSymmetric:
                return is_purely_non_free(act);
            case GenusKind::Tag::SymmetricHyperbolic:
                return act.kernel == KernelClassTag::RiemannWithAnticonformal;
            case GenusKind::Tag::Crosscap:
                return act.kernel == KernelClassTag::KleinNonorientable;
            case GenusKind::Tag::StrongPseudoReal:
            case GenusKind::Tag::SigmaPs: {
                if (act.kernel != KernelClassTag::RiemannWithAnticonformal) return false;
                if (!act.pseudo_real_admissible) return false;
                auto pair = extension_pair(pres, epi);
                if (pair && has_inverting_automorphism(*g, *pair)) return false;
                return true;
            }
        }
        return false;
    }
};

} // namespace

GenusReport minimal_genus(GroupPtr g, const GenusKind& kind, long long genus_floor) {
    if (g->order > 256) fail(ErrorCode::CapExceeded, "minimal_genus order cap is 256");
    KindMachinery km(g, kind);
    bool klein = kind.is_klein();
    long long floor = genus_floor >= 0 ? genus_floor : (klein ? 3 : 2);

    GenusReport rep;
    rep.kind = kind;
    // reduced area never exceeds 16 in scope; derive the genus cap from it
    long long cap = klein ? 2 + 16 * g->order : 1 + 8 * g->order;

    for (long long cand = floor; cand <= cap; cand++) {
        Rational area = klein ? Rational(cand - 2, g->order)
                              : Rational(2 * (cand - 1), g->order);
        if (!(area > Rational(0))) {
            rep.excluded_minima.push_back({cand, "nonintegral_genus"});
            continue;
        }
        SignatureConstraints c = km.shape;
        c.max_reduced_area = area;
        std::vector<Signature> sigs;
        for (const auto& s : enumerate_signatures(c))
            if (reduced_area(s) == area && km.shape_admits(s)) sigs.push_back(s);
        rep.area_bound_used = area;
        if (sigs.empty()) {
            rep.excluded_minima.push_back({cand, "nonintegral_genus"});
            continue;
        }
        bool any_smooth = false;
        std::vector<ActionRecord> witnesses;
        for (const auto& s : sigs) {
            rep.signatures_examined++;
            Presentation pres = presentation_of(s);
            SearchResult res = smooth_epimorphisms(pres, g, km.opts);
            if (res.epis.empty()) {
                // reason refinement: was the signature empty outright, or did
                // the orientation constraint kill it?
                if (km.opts.constraint != OrientationConstraint::None) {
                    SearchOptions unconstrained;
                    if (!smooth_epimorphisms(pres, g, unconstrained).epis.empty())
                        any_smooth = true;
                }
                continue;
            }
            any_smooth = true;
            bool sig_has_witness = false;
            for (const auto& epi : res.epis) {
                ActionRecord act = classify_action(pres, g, epi);
                if (act.genus != cand)
                    fail(ErrorCode::NonIntegralGenus, "genus mismatch in certificate");
                if (!km.keep(act, pres, epi)) continue;
                if (kind.tag == GenusKind::Tag::PureSymmetric) act.purely_non_free = true;
                witnesses.push_back(std::move(act));
                sig_has_witness = true;
            }
            if (sig_has_witness) rep.signatures_with_actions++;
        }
        if (!witnesses.empty()) {
            rep.value = cand;
            rep.witnesses = std::move(witnesses);
            for (const auto& w : rep.witnesses) {
                Signature fs = w.sig.is_fuchsian() ? w.sig : canonical_fuchsian_signature(w.sig);
                auto ext = singerman_extension(fs);
                rep.maximality_notes.push_back(
                    ext ? "full-group claim requires maximality choice; admits " + *ext : "");
            }
            return rep;
        }
        rep.excluded_minima.push_back(
            {cand, any_smooth ? "fails_kind_filter" : "no_smooth_epimorphism"});
    }
    fail(ErrorCode::NoActionFound, "no action of kind " + kind.name() + " up to genus cap");
}

PseudoRealCatalogResult pseudo_real_genus_with_catalog(GroupPtr g,
                                                       const std::vector<GroupSpec>& overgroups) {
    PseudoRealCatalogResult out;
    GenusKind psk;
    psk.tag = GenusKind::Tag::StrongPseudoReal;
    out.anticonformal_report = minimal_genus(g, psk);
    out.value = out.anticonformal_report.value;
    out.attained_by = "anticonformal";

    for (const auto& spec : overgroups) {
        GroupPtr l = materialize_group(spec);
        std::vector<int> l_invol = l->involutions();
        bool any_branch = false;
        for (const auto& lplus : index_two_subgroups(l)) {
            bool contains_invols = true;
            for (int t : l_invol)
                if (!lplus.contains(t)) contains_invols = false;
            if (!contains_invols) continue;
            GroupPtr lp = subgroup_as_group(lplus);
            if (!embeds(*g, *lp)) continue;
            any_branch = true;
            GenusKind sps;
            sps.tag = GenusKind::Tag::SigmaPs;
            sps.subgroup = lplus;
            GenusReport r = minimal_genus(l, sps);
            std::ostringstream label;
            label << spec.canonical_text() << " with plus part of order " << lplus.order();
            out.conformal_branches.push_back({label.str(), r.value});
            if (r.value < out.value) {
                out.value = r.value;
                out.attained_by = "conformal_only";
            }
        }
        if (!any_branch)
            fail(ErrorCode::EmbeddingFails,
                 "no index-2 subgroup of " + spec.canonical_text() +
                     " admits an embedded copy of the group");
    }
    return out;
}

MaxOrderCheck max_pseudo_real_order_check(int g) {
    if (g < 2 || g % 2 == 0)
        fail(ErrorCode::UnsupportedGenus, "pseudo-real QA_n genera are odd and >= 2");
    long long order = 2LL * g + 2;
    int n = 0;
    while ((1LL << (n + 1)) <= order) n++;
    if ((1LL << n) != order || n < 4)
        fail(ErrorCode::UnsupportedGenus,
             "2g+2 = " + std::to_string(order) + " is not a power of two >= 16");

    GroupPtr qa = materialize_group(GroupSpec::qa(n));
    GenusKind psk;
    psk.tag = GenusKind::Tag::StrongPseudoReal;
    KindMachinery km(qa, psk);

    MaxOrderCheck out;
    // all candidate signatures with |QA_n| > 2(genus - 1), i.e. area < 1
    SignatureConstraints c = km.shape;
    c.max_reduced_area = Rational(1);
    std::vector<Signature> surviving;
    for (const auto& s : enumerate_signatures(c)) {
        if (!(reduced_area(s) < Rational(1))) continue;
        Presentation pres = presentation_of(s);
        SearchResult res = smooth_epimorphisms(pres, qa, km.opts);
        bool keep = false;
        for (const auto& epi : res.epis) {
            ActionRecord act = classify_action(pres, qa, epi);
            if (km.keep(act, pres, epi)) keep = true;
        }
        if (keep) surviving.push_back(s);
        if (keep && genus_from_action(s, qa->order, SurfaceKind::Riemann) == g)
            out.attained = true;
    }
    if (surviving.size() == 1) out.forced_signature = surviving[0];
    return out;
}

} // namespace qan
