#include "qan/equivalence.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qan {

std::string MoveSet::describe() const {
    std::string s = "Aut(G)";
    if (fuchsian_braids) s += "+braids";
    for (const auto& m : nec_moves) s += "+{" + m.name + "}";
    return s;
}

NecMove MoveSet::move_L() {
    return {"L", {{"d1", "x1*d1^-1"}, {"x1", "d1*x1*d1^-1"}, {"x2", "x2^-1"}}};
}

NecMove MoveSet::move_Q() {
    return {"Q",
            {{"d1", "x2*d1"}, {"x1", "d1^-1*x2*d1"}, {"x2", "x1"}, {"x3", "x2*x3*x2"}}};
}

MoveSet MoveSet::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open move file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    MoveSet ms;
    ms.fuchsian_braids = j.value("fuchsian_braids", false);
    if (j.contains("nec_moves"))
        for (const auto& jm : j["nec_moves"]) {
            NecMove m;
            m.name = jm.at("name").get<std::string>();
            for (auto it = jm.at("subs").begin(); it != jm.at("subs").end(); ++it)
                m.subs[it.key()] = it.value().get<std::string>();
            ms.nec_moves.push_back(m);
        }
    return ms;
}

namespace {

int word_orientation(const Presentation& pres, const Word& w) {
    int c = +1;
    for (const auto& [gen, exp] : w)
        if (pres.gens[gen].orientation < 0 && (exp % 2 != 0)) c = -c;
    return c;
}

// Compile a move against a presentation: each generator gets a word, the
// orientation character must be preserved. Smoothness preservation is
// verified on every input epimorphism by the orbit engine (fail fast).
std::vector<Word> compile_move(const Presentation& pres, const NecMove& m) {
    std::vector<Word> sub(pres.gens.size());
    for (size_t i = 0; i < pres.gens.size(); i++) sub[i] = {{int(i), 1}};
    for (const auto& [label, word] : m.subs) {
        int ix = pres.gen_index(label);
        sub[ix] = pres.parse_word(word);
    }
    for (size_t i = 0; i < pres.gens.size(); i++)
        if (word_orientation(pres, sub[i]) != pres.gens[i].orientation)
            fail(ErrorCode::MoveNotAutomorphism,
                 "move " + m.name + " flips the orientation character of " + pres.gens[i].label);
    return sub;
}

struct OrbitEngine {
    const Presentation& pres;
    const GroupTable& g;
    const std::vector<Epimorphism>& epis;
    std::map<std::vector<int>, int> index;
    std::vector<int> uf;

    OrbitEngine(const Presentation& p, const GroupTable& g_, const std::vector<Epimorphism>& e)
        : pres(p), g(g_), epis(e) {
        for (size_t i = 0; i < epis.size(); i++) {
            if (!index.emplace(epis[i].images, int(i)).second)
                fail(ErrorCode::MixedInputs, "duplicate epimorphism in input");
        }
        uf.resize(epis.size());
        for (size_t i = 0; i < uf.size(); i++) uf[i] = int(i);
    }

    int find(int a) {
        while (uf[a] != a) a = uf[a] = uf[uf[a]];
        return a;
    }
    void unite(int a, int b) { uf[find(a)] = find(b); }

    int locate(const std::vector<int>& images, const std::string& why) {
        auto it = index.find(images);
        if (it == index.end())
            fail(why.rfind("move", 0) == 0 ? ErrorCode::MoveNotAutomorphism
                                           : ErrorCode::MixedInputs,
                 why + " leaves the input set; input is not closed");
        return it->second;
    }

    void apply_auts(const std::vector<Automorphism>& auts) {
        for (size_t i = 0; i < epis.size(); i++)
            for (const auto& om : auts) {
                std::vector<int> img = epis[i].images;
                for (auto& v : img) v = om(v);
                unite(int(i), locate(img, "Aut(G) post-composition"));
            }
    }

    void apply_word_move(const std::vector<Word>& sub, const std::string& name) {
        for (size_t i = 0; i < epis.size(); i++) {
            std::vector<int> img(pres.gens.size());
            for (size_t k = 0; k < pres.gens.size(); k++)
                img[k] = eval_word(g, epis[i].images, sub[k]);
            unite(int(i), locate(img, "move " + name));
        }
    }

    void apply_braids() {
        const auto& periods = pres.sig.periods;
        size_t r = periods.size();
        for (size_t i = 0; i + 1 < r; i++) {
            if (periods[i] != periods[i + 1]) continue;  // period-compatible positions only
            for (size_t k = 0; k < epis.size(); k++) {
                std::vector<int> img = epis[k].images;
                int gi = img[i], gj = img[i + 1];
                img[i] = g.mul(g.mul(gi, gj), g.inv(gi));
                img[i + 1] = gi;
                unite(int(k), locate(img, "braid move"));
                img = epis[k].images;
                img[i] = gj;
                img[i + 1] = g.mul(g.mul(g.inv(gj), gi), gj);
                unite(int(k), locate(img, "inverse braid move"));
            }
        }
    }

    OrbitReport report(const std::string& moves_desc, const std::vector<Automorphism>& auts) {
        OrbitReport rep;
        rep.move_set_used = moves_desc;
        std::map<int, std::vector<int>> orbits;
        for (size_t i = 0; i < epis.size(); i++) orbits[find(int(i))].push_back(int(i));
        std::vector<std::pair<Epimorphism, int>> reps;
        std::vector<std::vector<int>> members;
        for (auto& [root, ms] : orbits) {
            Epimorphism least = epis[ms[0]];
            for (int m : ms) least = std::min(least, epis[m]);
            reps.push_back({least, int(ms.size())});
            members.push_back(ms);
        }
        std::vector<size_t> order(reps.size());
        for (size_t i = 0; i < order.size(); i++) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return reps[a].first < reps[b].first; });
        for (size_t i : order) {
            rep.representatives.push_back(reps[i].first);
            rep.orbit_sizes.push_back(reps[i].second);
        }
        rep.orbit_count = int(rep.representatives.size());

        // lower-bound evidence: multiset of Aut(G)-orbit ids of the torsion
        // word images is constant on topological classes
        if (rep.orbit_count >= 1) {
            std::vector<int> aut_orbit(g.order, -1);
            int nor = 0;
            for (int e = 0; e < g.order; e++) {
                if (aut_orbit[e] >= 0) continue;
                for (const auto& om : auts)
                    if (aut_orbit[om(e)] < 0) aut_orbit[om(e)] = nor;
                nor++;
            }
            auto inv_of = [&](const Epimorphism& ep) {
                std::vector<int> ids;
                for (const auto& [w, m] : pres.torsion) {
                    (void)m;
                    ids.push_back(aut_orbit[eval_word(g, ep.images, w)]);
                }
                std::sort(ids.begin(), ids.end());
                std::ostringstream os;
                for (size_t i = 0; i < ids.size(); i++) os << (i ? "," : "") << ids[i];
                return os.str();
            };
            std::set<std::string> distinct;
            for (const auto& rp : rep.representatives) {
                rep.invariant_values.push_back(inv_of(rp));
                distinct.insert(rep.invariant_values.back());
            }
            if (rep.orbit_count > 1 && int(distinct.size()) == rep.orbit_count)
                rep.invariant_separators.push_back("aut-orbit-multiset-of-torsion-images");
        }
        return rep;
    }
};

} // namespace

OrbitReport classify_orbits(const Presentation& pres, GroupPtr g,
                            const std::vector<Epimorphism>& epis,
                            const std::vector<Automorphism>& auts, const MoveSet& moves) {
    OrbitEngine eng(pres, *g, epis);
    eng.apply_auts(auts);
    for (const auto& m : moves.nec_moves) {
        auto sub = compile_move(pres, m);
        eng.apply_word_move(sub, m.name);
    }
    if (moves.fuchsian_braids) {
        if (!pres.sig.is_fuchsian() || pres.sig.genus != 0)
            fail(ErrorCode::WrongSignatureShape, "braid moves need a genus-0 Fuchsian signature");
        eng.apply_braids();
    }
    return eng.report(moves.describe(), auts);
}

OrbitReport hurwitz_braid_closure(const Presentation& pres, GroupPtr g,
                                  const std::vector<Epimorphism>& epis,
                                  const std::vector<Automorphism>& auts) {
    if (!pres.sig.is_fuchsian() || pres.sig.genus != 0)
        fail(ErrorCode::WrongSignatureShape, "braid closure needs a genus-0 Fuchsian signature");
    return classify_orbits(pres, g, epis, auts, MoveSet::braids());
}

} // namespace qan
