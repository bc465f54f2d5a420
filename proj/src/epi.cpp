#include "qan/epi.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qan {

const char* kernel_class_name(KernelClassTag t) {
    switch (t) {
        case KernelClassTag::RiemannConformal: return "riemann_conformal";
        case KernelClassTag::RiemannWithAnticonformal: return "riemann_with_anticonformal";
        case KernelClassTag::KleinNonorientable: return "klein_nonorientable";
    }
    return "?";
}

int eval_word(const GroupTable& g, const std::vector<int>& images, const Word& w) {
    int acc = g.identity;
    for (const auto& [gen, exp] : w) acc = g.mul(acc, g.pow(images[gen], exp));
    return acc;
}

std::vector<int> plus_part_image(const Presentation& pres, const GroupTable& g,
                                 const std::vector<int>& images) {
    int n0 = -1;
    for (size_t i = 0; i < pres.gens.size(); i++)
        if (pres.gens[i].orientation < 0) {
            n0 = int(i);
            break;
        }
    if (n0 < 0) {
        std::vector<int> all(g.order);
        for (int e = 0; e < g.order; e++) all[e] = e;
        return all;
    }
    // Reidemeister-Schreier generators for the orientation kernel with
    // transversal {1, n0}
    std::vector<int> gens;
    int tn0 = images[n0];
    for (size_t i = 0; i < pres.gens.size(); i++) {
        int ti = images[i];
        if (pres.gens[i].orientation > 0) {
            gens.push_back(ti);
            gens.push_back(g.mul(g.mul(tn0, ti), g.inv(tn0)));
        } else {
            gens.push_back(g.mul(ti, g.inv(tn0)));
            gens.push_back(g.mul(tn0, ti));
        }
    }
    return closure(g, gens);
}

void check_epimorphism(const Presentation& pres, const GroupTable& g,
                       const std::vector<int>& images) {
    if (images.size() != pres.gens.size())
        fail(ErrorCode::WitnessFails, "image count does not match generator count");
    for (const auto& [w, m] : pres.torsion) {
        int e = eval_word(g, images, w);
        if (g.order_of(e) != m)
            fail(ErrorCode::WitnessFails, "torsion word " + pres.word_str(w) + " maps to " +
                                              g.name(e) + " of order " +
                                              std::to_string(g.order_of(e)) + ", need exactly " +
                                              std::to_string(m));
    }
    for (const auto& rel : pres.relations) {
        int e = eval_word(g, images, rel);
        if (e != g.identity)
            fail(ErrorCode::WitnessFails,
                 "relation " + pres.word_str(rel) + " maps to " + g.name(e) + ", not 1");
    }
    if (int(closure(g, images).size()) != g.order)
        fail(ErrorCode::WitnessFails, "images do not generate the target group");
}

ActionRecord classify_action(const Presentation& pres, GroupPtr g, const Epimorphism& epi) {
    ActionRecord act;
    act.sig = pres.sig;
    act.pres = std::make_shared<Presentation>(pres);
    act.target = g;
    act.epi = epi;
    act.plus_part = plus_part_image(pres, *g, epi.images);
    size_t idx = size_t(g->order) / act.plus_part.size();
    if (idx != 1 && idx != 2)
        fail(ErrorCode::InvalidSpec, "plus part has index " + std::to_string(idx));
    if (pres.sig.is_fuchsian()) {
        act.kernel = KernelClassTag::RiemannConformal;
        act.genus = genus_from_action(pres.sig, g->order, SurfaceKind::Riemann);
    } else if (idx == 2) {
        act.kernel = KernelClassTag::RiemannWithAnticonformal;
        act.genus = genus_from_action(pres.sig, g->order, SurfaceKind::Riemann);
    } else {
        act.kernel = KernelClassTag::KleinNonorientable;
        act.genus = genus_from_action(pres.sig, g->order, SurfaceKind::Klein);
    }
    act.pseudo_real_admissible = false;
    if (act.kernel == KernelClassTag::RiemannWithAnticonformal) {
        bool ok = true;
        for (int t : g->involutions())
            if (!std::binary_search(act.plus_part.begin(), act.plus_part.end(), t)) ok = false;
        act.pseudo_real_admissible = ok;
    }
    return act;
}

// ---------------------------------------------------------------------------
// Pruned search

namespace {

struct SearchPlan {
    const Presentation& pres;
    const GroupTable& g;
    const SearchOptions& opts;

    std::vector<int> searched;                  // generator indices, in search order
    std::vector<std::vector<int>> candidates;   // per searched position
    int solve_target = -1;                      // e_k or x_r solved from the long relation
    std::vector<int> solved_reflections;        // c_{i,s_i} with s_i >= 1
    std::vector<std::pair<Word, int>> pair_torsion;  // consecutive-reflection constraints
    std::vector<Word> check_relations;          // relations rechecked at leaves
    Word long_prefix, long_suffix;              // around the solve target
    std::vector<char> in_plus;                  // membership for PlusPartEquals
    Mod2Quotient mq;                            // for generation pruning

    // relations checkable as soon as a searched generator is placed:
    // by position -> list of (word, exact_order or 0 for plain relation)
    std::vector<std::vector<std::pair<Word, int>>> checks_at;

    explicit SearchPlan(const Presentation& p, const GroupTable& g_, const SearchOptions& o)
        : pres(p), g(g_), opts(o) {
        mq = mod2_quotient(g_);
        build();
    }

    bool want(int gen, int e) const {  // candidate filter per orientation constraint
        if (opts.constraint != OrientationConstraint::PlusPartEquals) return true;
        bool pos = pres.gens[gen].orientation > 0;
        return pos == bool(in_plus[e]);
    }

    void build() {
        const Signature& sig = pres.sig;
        int r = int(sig.periods.size());
        int k = int(sig.cycles.size());

        if (opts.constraint == OrientationConstraint::PlusPartEquals) {
            if (pres.sig.is_fuchsian() && int(opts.plus_part.size()) != g.order)
                fail(ErrorCode::InconsistentConstraint,
                     "Fuchsian source cannot have a proper plus part");
            in_plus.assign(g.order, 0);
            for (int e : opts.plus_part) in_plus[e] = 1;
        }
        if (pres.sig.is_fuchsian() && opts.constraint == OrientationConstraint::PlusPartProper)
            fail(ErrorCode::InconsistentConstraint,
                 "Fuchsian source cannot have a proper plus part");

        std::vector<int> ell_ix, e_ix, cend_ix, refl_ix, handle_ix;
        for (size_t i = 0; i < pres.gens.size(); i++) {
            const auto& gen = pres.gens[i];
            switch (gen.kind) {
                case GenKind::Elliptic: ell_ix.push_back(int(i)); break;
                case GenKind::Boundary: e_ix.push_back(int(i)); break;
                case GenKind::Reflection: {
                    int si = int(sig.cycles[gen.cycle].size());
                    if (si >= 1 && gen.pos == si) cend_ix.push_back(int(i));
                    else refl_ix.push_back(int(i));
                    break;
                }
                default: handle_ix.push_back(int(i)); break;
            }
        }
        solved_reflections = cend_ix;

        // solve the last boundary generator, else the last (largest-period) elliptic
        if (k >= 1) solve_target = e_ix.back();
        else if (r >= 1) solve_target = ell_ix.back();

        // search order: reflections, elliptics by decreasing period, boundary,
        // glide/hyperbolic
        for (int ix : refl_ix) searched.push_back(ix);
        std::vector<int> ell_sorted = ell_ix;
        if (solve_target >= 0 && !ell_sorted.empty() && solve_target == ell_sorted.back())
            ell_sorted.pop_back();
        std::stable_sort(ell_sorted.begin(), ell_sorted.end(), [&](int a, int b) {
            return sig.periods[pres.gens[a].pos] > sig.periods[pres.gens[b].pos];
        });
        for (int ix : ell_sorted) searched.push_back(ix);
        for (int ix : e_ix)
            if (ix != solve_target) searched.push_back(ix);
        for (int ix : handle_ix) searched.push_back(ix);

        // candidate sets
        std::vector<int> invol = g.involutions();
        std::vector<int> all(g.order);
        for (int e = 0; e < g.order; e++) all[e] = e;
        for (int ix : searched) {
            const auto& gen = pres.gens[ix];
            std::vector<int> cand;
            switch (gen.kind) {
                case GenKind::Reflection: cand = invol; break;
                case GenKind::Elliptic: cand = g.elements_of_order(sig.periods[gen.pos]); break;
                default: cand = all; break;
            }
            std::vector<int> kept;
            for (int e : cand)
                if (want(ix, e)) kept.push_back(e);
            candidates.push_back(kept);
        }

        // long relation split around the solve target
        const Word& lng = pres.relations.back();
        if (solve_target >= 0) {
            size_t t = 0;
            while (t < lng.size() && lng[t].first != solve_target) t++;
            long_prefix = Word(lng.begin(), lng.begin() + t);
            long_suffix = Word(lng.begin() + t + 1, lng.end());
        }

        // schedule relation / pair-torsion checks at the deepest searched
        // generator they mention; anything touching a solved generator (or the
        // solve target) is deferred to the leaf
        std::vector<int> pos_of(pres.gens.size(), -1);
        for (size_t i = 0; i < searched.size(); i++) pos_of[searched[i]] = int(i);
        checks_at.assign(searched.size(), {});
        auto depth_of = [&](const Word& w) {  // -1 if some generator is solved, not searched
            int deepest = -1;
            for (const auto& [gen, exp] : w) {
                (void)exp;
                if (pos_of[gen] < 0) return -1;
                deepest = std::max(deepest, pos_of[gen]);
            }
            return deepest;
        };
        for (const auto& [w, m] : pres.torsion)
            if (w.size() == 2) pair_torsion.push_back({w, m});  // consecutive-reflection product
        // single-generator torsion is enforced by the candidate sets; pair
        // torsion and relations are pruned mid-tree when fully searched, and
        // everything is rechecked at the leaf anyway
        for (const auto& [w, m] : pair_torsion) {
            int d = depth_of(w);
            if (d >= 0) checks_at[d].push_back({w, m});
        }
        for (const auto& rel : pres.relations) {
            if (&rel == &pres.relations.back() && solve_target >= 0) continue;  // used to solve
            if (rel.size() == 1) continue;  // power relation, implied by exact order
            int d = depth_of(rel);
            if (d >= 0) checks_at[d].push_back({rel, 0});
            else check_relations.push_back(rel);
        }
    }
};

struct Dfs {
    const SearchPlan& plan;
    const GroupTable& g;
    std::vector<int> assign;                // images by generator index, -1 unset
    std::vector<uint32_t> basis;            // F_2 row echelon of assigned image coords
    std::vector<Epimorphism> found;
    long long nodes = 0;
    std::atomic<long long>* global_nodes;
    long long budget;
    std::atomic<bool>* aborted;

    Dfs(const SearchPlan& p, std::atomic<long long>* gn, long long b, std::atomic<bool>* ab)
        : plan(p), g(p.g), global_nodes(gn), budget(b), aborted(ab) {
        assign.assign(p.pres.gens.size(), -1);
    }

    bool over_budget() {
        if (budget < 0) return false;
        if (aborted->load(std::memory_order_relaxed)) return true;
        if (global_nodes->load(std::memory_order_relaxed) > budget) {
            aborted->store(true, std::memory_order_relaxed);
            return true;
        }
        return false;
    }

    void run(size_t depth) {
        if (depth == plan.searched.size()) {
            leaf();
            return;
        }
        int gen = plan.searched[depth];
        for (int e : plan.candidates[depth]) {
            nodes++;
            global_nodes->fetch_add(1, std::memory_order_relaxed);
            if (over_budget()) return;
            assign[gen] = e;
            if (!checks_pass(depth)) continue;
            bool grew = rank_extend(e);
            if (rank_feasible(depth)) run(depth + 1);
            if (grew) basis.pop_back();
        }
        assign[gen] = -1;
    }

    // used by the parallel driver to pin the first generator
    void run_with_first(int first_value) {
        if (plan.searched.empty()) {
            leaf();
            return;
        }
        int gen = plan.searched[0];
        nodes++;
        global_nodes->fetch_add(1, std::memory_order_relaxed);
        if (over_budget()) return;
        assign[gen] = first_value;
        if (!checks_pass(0)) return;
        rank_extend(first_value);
        if (rank_feasible(0)) run(1);
    }

    bool checks_pass(size_t depth) {
        for (const auto& [w, m] : plan.checks_at[depth]) {
            int e = eval_word(g, assign, w);
            if (m > 0) {
                if (g.order_of(e) != m) return false;
            } else if (e != g.identity) {
                return false;
            }
        }
        return true;
    }

    // Generation pruning through the mod-2 quotient: the images must span
    // G/<squares>, and only the searched generators can contribute (solved
    // generators are words in them). Each remaining searched generator adds
    // at most one to the span's rank.
    bool rank_extend(int e) {
        uint32_t v = plan.mq.coords[e];
        for (uint32_t b : basis) v = std::min(v, v ^ b);
        if (v == 0) return false;
        basis.push_back(v);
        return true;
    }

    bool rank_feasible(size_t depth) {
        size_t remaining = plan.searched.size() - depth - 1;
        return basis.size() + remaining >= size_t(plan.mq.dim);
    }

    void leaf() {
        // solve the long-relation generator
        if (plan.solve_target >= 0) {
            int pre = eval_word(g, assign, plan.long_prefix);
            int suf = eval_word(g, assign, plan.long_suffix);
            int val = g.mul(g.inv(pre), g.inv(suf));
            const auto& gen = plan.pres.gens[plan.solve_target];
            if (gen.kind == GenKind::Elliptic &&
                g.order_of(val) != plan.pres.sig.periods[gen.pos])
                return;
            if (!plan.want(plan.solve_target, val)) return;
            assign[plan.solve_target] = val;
        }
        // solve cycle-end reflections: c_{i,s_i} = e_i c_{i0} e_i^-1
        for (int cix : plan.solved_reflections) {
            int cyc = plan.pres.gens[cix].cycle;
            int e_i = -1, c0 = -1;
            for (size_t i = 0; i < plan.pres.gens.size(); i++) {
                const auto& pg = plan.pres.gens[i];
                if (pg.cycle == cyc && pg.kind == GenKind::Boundary) e_i = int(i);
                if (pg.cycle == cyc && pg.kind == GenKind::Reflection && pg.pos == 0) c0 = int(i);
            }
            int val = g.conj(assign[c0], assign[e_i]);
            if (val == g.identity) return;  // must stay an involution
            if (!plan.want(cix, val)) return;
            assign[cix] = val;
        }
        // deferred relation and torsion checks
        for (const auto& rel : plan.check_relations)
            if (eval_word(g, assign, rel) != g.identity) return;
        for (const auto& [w, m] : plan.pair_torsion)
            if (g.order_of(eval_word(g, assign, w)) != m) return;
        // full smoothness re-check through the raw table
        for (const auto& [w, m] : plan.pres.torsion)
            if (g.order_of(eval_word(g, assign, w)) != m) return;
        for (const auto& rel : plan.pres.relations)
            if (eval_word(g, assign, rel) != g.identity) return;
        // surjectivity
        if (int(closure(g, assign).size()) != g.order) return;
        // orientation constraint
        if (plan.opts.constraint != OrientationConstraint::None) {
            std::vector<int> pp = plus_part_image(plan.pres, g, assign);
            switch (plan.opts.constraint) {
                case OrientationConstraint::PlusPartEquals:
                    if (pp != plan.opts.plus_part) return;
                    break;
                case OrientationConstraint::PlusPartProper:
                    if (int(pp.size()) == g.order) return;
                    break;
                case OrientationConstraint::PlusPartFull:
                    if (int(pp.size()) != g.order) return;
                    break;
                default: break;
            }
        }
        found.push_back(Epimorphism{assign});
    }
};

} // namespace

SearchResult smooth_epimorphisms(const Presentation& pres, GroupPtr gp, const SearchOptions& opts) {
    const GroupTable& g = *gp;
    SearchPlan plan(pres, g, opts);
    std::atomic<long long> global_nodes{0};
    std::atomic<bool> aborted{false};

    SearchResult res;
    if (plan.searched.empty()) {
        Dfs dfs(plan, &global_nodes, opts.budget, &aborted);
        dfs.leaf();
        res.epis = std::move(dfs.found);
        res.nodes = global_nodes.load();
        return res;
    }

    const std::vector<int>& first_cands = plan.candidates[0];
    std::vector<std::vector<Epimorphism>> buckets(first_cands.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < int(first_cands.size()); i++) {
        Dfs dfs(plan, &global_nodes, opts.budget, &aborted);
        dfs.run_with_first(first_cands[i]);
        buckets[i] = std::move(dfs.found);
    }

    if (aborted.load())
        fail(ErrorCode::BudgetExceeded,
             "search stopped after " + std::to_string(global_nodes.load()) + " nodes; partial results discarded");

    for (auto& b : buckets)
        res.epis.insert(res.epis.end(), b.begin(), b.end());
    std::sort(res.epis.begin(), res.epis.end());
    res.nodes = global_nodes.load();
    return res;
}

SearchResult smooth_epimorphisms_reference(const Presentation& pres, GroupPtr gp,
                                           const SearchOptions& opts) {
    const GroupTable& g = *gp;
    size_t ngens = pres.gens.size();
    double total = 1;
    for (size_t i = 0; i < ngens; i++) total *= g.order;
    if (total > double(1LL << 34))
        fail(ErrorCode::CapExceeded, "reference search space too large");
    bool wants_proper =
        opts.constraint == OrientationConstraint::PlusPartProper ||
        (opts.constraint == OrientationConstraint::PlusPartEquals &&
         int(opts.plus_part.size()) != g.order);
    if (pres.sig.is_fuchsian() && wants_proper)
        fail(ErrorCode::InconsistentConstraint, "Fuchsian source cannot have a proper plus part");

    SearchResult res;
    std::vector<int> tuple(ngens, 0);
    long long nodes = 0;
    while (true) {
        nodes++;
        bool ok = true;
        for (const auto& [w, m] : pres.torsion)
            if (g.order_of(eval_word(g, tuple, w)) != m) {
                ok = false;
                break;
            }
        if (ok)
            for (const auto& rel : pres.relations)
                if (eval_word(g, tuple, rel) != g.identity) {
                    ok = false;
                    break;
                }
        if (ok && int(closure(g, tuple).size()) != g.order) ok = false;
        if (ok && opts.constraint != OrientationConstraint::None) {
            std::vector<int> pp = plus_part_image(pres, g, tuple);
            if (opts.constraint == OrientationConstraint::PlusPartEquals && pp != opts.plus_part)
                ok = false;
            if (opts.constraint == OrientationConstraint::PlusPartProper &&
                int(pp.size()) == g.order)
                ok = false;
            if (opts.constraint == OrientationConstraint::PlusPartFull &&
                int(pp.size()) != g.order)
                ok = false;
        }
        if (ok) res.epis.push_back(Epimorphism{tuple});

        size_t pos = 0;
        while (pos < ngens) {
            tuple[pos]++;
            if (tuple[pos] < g.order) break;
            tuple[pos] = 0;
            pos++;
        }
        if (pos == ngens) break;
    }
    std::sort(res.epis.begin(), res.epis.end());
    res.nodes = nodes;
    return res;
}

} // namespace qan
