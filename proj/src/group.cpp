#include "qan/group.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qan/coset_enum.hpp"

namespace qan {

static std::vector<int> minimal_generating_tuple_of_subset(const GroupTable& g,
                                                           const std::vector<int>& elems);

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::CosetCapExceeded: return "CosetCapExceeded";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::NotGenerating: return "NotGenerating";
        case ErrorCode::NotProperNEC: return "NotProperNEC";
        case ErrorCode::NonexistentSignature: return "NonexistentSignature";
        case ErrorCode::NonIntegralGenus: return "NonIntegralGenus";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::InconsistentConstraint: return "InconsistentConstraint";
        case ErrorCode::MixedInputs: return "MixedInputs";
        case ErrorCode::MoveNotAutomorphism: return "MoveNotAutomorphism";
        case ErrorCode::WrongSignatureShape: return "WrongSignatureShape";
        case ErrorCode::WitnessFails: return "WitnessFails";
        case ErrorCode::NotConformalAction: return "NotConformalAction";
        case ErrorCode::MissingSubgroupStructure: return "MissingSubgroupStructure";
        case ErrorCode::UnsupportedGenus: return "UnsupportedGenus";
        case ErrorCode::EmbeddingFails: return "EmbeddingFails";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::NotTransitive: return "NotTransitive";
        case ErrorCode::NoActionFound: return "NoActionFound";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Error";
}

static constexpr int kMaxTableOrder = 4096;

// ---------------------------------------------------------------------------
// GroupTable basics

int GroupTable::pow(int a, long long k) const {
    int o = elt_order[a];
    long long r = k % o;
    if (r < 0) r += o;
    int acc = identity;
    for (long long i = 0; i < r; i++) acc = mul(acc, a);
    return acc;
}

int GroupTable::generator(const std::string& label) const {
    for (const auto& [l, e] : generators)
        if (l == label) return e;
    fail(ErrorCode::ParseError, "no generator named '" + label + "' in " + spec_text);
}

std::vector<int> GroupTable::involutions() const {
    std::vector<int> out;
    for (int e = 0; e < order; e++)
        if (elt_order[e] == 2) out.push_back(e);
    return out;
}

std::vector<int> GroupTable::elements_of_order(int m) const {
    std::vector<int> out;
    for (int e = 0; e < order; e++)
        if (elt_order[e] == m) out.push_back(e);
    return out;
}

std::vector<int> GroupTable::order_spectrum_set() const {
    std::set<int> s(elt_order.begin(), elt_order.end());
    return std::vector<int>(s.begin(), s.end());
}

void GroupTable::check_axioms() const {
    for (int a = 0; a < order; a++) {
        if (mul(identity, a) != a || mul(a, identity) != a)
            fail(ErrorCode::InvalidSpec, "identity axiom fails in " + spec_text);
        if (mul(a, inv(a)) != identity || mul(inv(a), a) != identity)
            fail(ErrorCode::InvalidSpec, "inverse axiom fails in " + spec_text);
    }
    for (int a = 0; a < order; a++)
        for (int b = 0; b < order; b++)
            for (int c = 0; c < order; c++)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    fail(ErrorCode::InvalidSpec, "associativity fails in " + spec_text);
    std::vector<int> gens;
    for (const auto& [l, e] : generators) gens.push_back(e);
    if (int(closure(*this, gens).size()) != order)
        fail(ErrorCode::InvalidSpec, "named generators do not generate " + spec_text);
}

bool Subgroup::contains(int e) const {
    return std::binary_search(elements.begin(), elements.end(), e);
}

// ---------------------------------------------------------------------------
// Construction helpers

namespace {

void finish_table(GroupTable& g) {
    int n = g.order;
    g.inv_table.assign(n, 0);
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++)
            if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) {
                g.inv_table[a] = uint16_t(b);
                break;
            }
    g.elt_order.assign(n, 1);
    for (int a = 0; a < n; a++) {
        int e = a, o = 1;
        while (e != g.identity) { e = g.mul(e, a); o++; }
        g.elt_order[a] = o;
    }
}

// names via BFS over the named generators; shortest word, ties broken by
// generator order
void bfs_names(GroupTable& g) {
    g.names.assign(g.order, "");
    g.names[g.identity] = "1";
    std::vector<int> frontier{g.identity};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int e : frontier) {
            for (const auto& [label, ge] : g.generators) {
                int u = g.mul(e, ge);
                if (!g.names[u].empty() || u == g.identity) continue;
                g.names[u] = (e == g.identity) ? label : g.names[e] + "*" + label;
                next.push_back(u);
            }
        }
        frontier = std::move(next);
    }
}

long long mod_pow(long long b, long long e, long long m) {
    long long r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::string power_name(const std::string& label, long long k) {
    if (k == 1) return label;
    return label + "^" + std::to_string(k);
}

GroupPtr build_metacyclic(const GroupSpec& spec) {
    long long M = spec.m, N = spec.n, F = ((spec.f % M) + M) % M, E = ((spec.e % M) + M) % M;
    if (M < 1 || N < 1) fail(ErrorCode::InvalidSpec, "metacyclic orders must be positive");
    if (M * N > kMaxTableOrder) fail(ErrorCode::CapExceeded, "metacyclic group too large");
    if (std::gcd(E, M) != 1 || mod_pow(E, N, M) != 1 % M)
        fail(ErrorCode::InvalidSpec, "conjugation exponent e must satisfy e^n = 1 mod m");
    if (F * (E - 1) % M != 0)
        fail(ErrorCode::InvalidSpec, "t^n = s^f requires f*(e-1) = 0 mod m");

    auto g = std::make_shared<GroupTable>();
    g->order = int(M * N);
    g->spec_text = spec.canonical_text();
    std::vector<long long> epow(N);
    for (long long j = 0; j < N; j++) epow[j] = mod_pow(E, j, M);

    g->mul_table.assign(size_t(g->order) * g->order, 0);
    auto idx = [&](long long i, long long j) { return int(i + M * j); };
    for (long long j = 0; j < N; j++)
        for (long long i = 0; i < M; i++)
            for (long long j2 = 0; j2 < N; j2++)
                for (long long i2 = 0; i2 < M; i2++) {
                    long long js = j + j2;
                    long long carry = js / N;
                    long long ii = (i + i2 * epow[j] + F * carry) % M;
                    g->mul_table[size_t(idx(i, j)) * g->order + idx(i2, j2)] =
                        uint16_t(idx(ii, js % N));
                }
    g->identity = 0;
    if (M > 1) g->generators.push_back({spec.s_label, idx(1, 0)});
    if (N > 1) g->generators.push_back({spec.t_label, idx(0, 1)});
    g->names.assign(g->order, "1");
    for (long long j = 0; j < N; j++)
        for (long long i = 0; i < M; i++) {
            std::string nm;
            if (i > 0) nm = power_name(spec.s_label, i);
            if (j > 0) nm += (nm.empty() ? "" : "*") + power_name(spec.t_label, j);
            if (!nm.empty()) g->names[idx(i, j)] = nm;
        }
    finish_table(*g);
    return g;
}

GroupPtr build_cyclic(long long m, const std::string& label = "g") {
    if (m < 1) fail(ErrorCode::InvalidSpec, "cyclic order must be positive");
    if (m > kMaxTableOrder) fail(ErrorCode::CapExceeded, "cyclic group too large");
    auto g = std::make_shared<GroupTable>();
    g->order = int(m);
    g->spec_text = "C:" + std::to_string(m);
    g->mul_table.assign(size_t(m) * m, 0);
    for (long long a = 0; a < m; a++)
        for (long long b = 0; b < m; b++) g->mul_table[size_t(a) * m + b] = uint16_t((a + b) % m);
    g->identity = 0;
    if (m > 1) g->generators.push_back({label, 1});
    g->names.assign(g->order, "1");
    for (long long i = 1; i < m; i++) g->names[i] = power_name(label, i);
    finish_table(*g);
    return g;
}

GroupPtr build_product(const GroupSpec& spec) {
    GroupPtr a = materialize_group(*spec.left), b = materialize_group(*spec.right);
    long long n = (long long)a->order * b->order;
    if (n > kMaxTableOrder) fail(ErrorCode::CapExceeded, "direct product too large");
    auto g = std::make_shared<GroupTable>();
    g->order = int(n);
    g->spec_text = spec.canonical_text();
    g->mul_table.assign(size_t(n) * n, 0);
    auto idx = [&](int i, int j) { return i + a->order * j; };
    for (int j = 0; j < b->order; j++)
        for (int i = 0; i < a->order; i++)
            for (int j2 = 0; j2 < b->order; j2++)
                for (int i2 = 0; i2 < a->order; i2++)
                    g->mul_table[size_t(idx(i, j)) * n + idx(i2, j2)] =
                        uint16_t(idx(a->mul(i, i2), b->mul(j, j2)));
    g->identity = idx(a->identity, b->identity);
    std::set<std::string> used;
    for (const auto& [l, e] : a->generators) {
        g->generators.push_back({l, idx(e, b->identity)});
        used.insert(l);
    }
    for (const auto& [l, e] : b->generators) {
        std::string lab = l;
        while (used.count(lab)) lab += "'";
        g->generators.push_back({lab, idx(a->identity, e)});
        used.insert(lab);
    }
    g->names.assign(g->order, "");
    for (int j = 0; j < b->order; j++)
        for (int i = 0; i < a->order; i++)
            g->names[idx(i, j)] = "(" + a->names[i] + "," + b->names[j] + ")";
    finish_table(*g);
    return g;
}

GroupPtr build_from_perms(const GroupSpec& spec) {
    int deg = spec.degree;
    if (deg < 1 || deg > 1024) fail(ErrorCode::InvalidSpec, "bad permutation degree");
    std::vector<std::vector<int>> gens;
    for (const auto& p : spec.perm_gens) {
        if (int(p.size()) != deg) fail(ErrorCode::InvalidSpec, "permutation length != degree");
        std::vector<int> q(deg);
        std::vector<char> seen(deg, 0);
        for (int i = 0; i < deg; i++) {
            int v = p[i] - 1;  // 1-based input
            if (v < 0 || v >= deg || seen[v]) fail(ErrorCode::InvalidSpec, "not a permutation");
            seen[v] = 1;
            q[i] = v;
        }
        gens.push_back(q);
    }
    std::vector<int> id(deg);
    std::iota(id.begin(), id.end(), 0);
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> elems{id};
    index[id] = 0;
    for (size_t head = 0; head < elems.size(); head++) {
        for (const auto& p : gens) {
            std::vector<int> q(deg);
            for (int i = 0; i < deg; i++) q[i] = p[elems[head][i]];  // head then p
            if (index.emplace(q, int(elems.size())).second) {
                elems.push_back(q);
                if (int(elems.size()) > kMaxTableOrder)
                    fail(ErrorCode::CapExceeded, "permutation group too large");
            }
        }
    }
    auto g = std::make_shared<GroupTable>();
    g->order = int(elems.size());
    g->spec_text = spec.canonical_text();
    g->identity = 0;
    g->mul_table.assign(size_t(g->order) * g->order, 0);
    for (int a = 0; a < g->order; a++)
        for (int b = 0; b < g->order; b++) {
            std::vector<int> q(deg);
            for (int i = 0; i < deg; i++) q[i] = elems[b][elems[a][i]];
            g->mul_table[size_t(a) * g->order + b] = uint16_t(index.at(q));
        }
    for (size_t k = 0; k < gens.size(); k++) {
        std::string lab = k < spec.perm_labels.size() ? spec.perm_labels[k]
                                                      : "p" + std::to_string(k);
        g->generators.push_back({lab, index.at(gens[k])});
    }
    bfs_names(*g);
    finish_table(*g);
    return g;
}

GroupPtr build_from_presentation(const GroupSpec& spec) {
    int k = int(spec.gen_labels.size());
    if (k == 0) fail(ErrorCode::InvalidSpec, "presentation needs generators");
    std::vector<std::vector<int>> rels;
    for (const auto& r : spec.relators) rels.push_back(parse_relator(spec.gen_labels, r));
    CosetEnumResult ce = coset_enumerate(k, rels, spec.coset_cap);
    int n = ce.ncosets;
    if (n > kMaxTableOrder) fail(ErrorCode::CapExceeded, "presented group too large to tabulate");

    // coset i is the element reached from the identity coset by some word;
    // record one such word per coset by BFS
    std::vector<std::vector<int>> word(n);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int c : frontier)
            for (int gix = 0; gix < k; gix++) {
                int u = ce.gen_action[gix][c];
                if (seen[u]) continue;
                seen[u] = 1;
                word[u] = word[c];
                word[u].push_back(gix);
                next.push_back(u);
            }
        frontier = std::move(next);
    }
    for (int c = 0; c < n; c++)
        if (!seen[c]) fail(ErrorCode::InvalidSpec, "coset table not transitive");

    auto g = std::make_shared<GroupTable>();
    g->order = n;
    g->identity = 0;
    g->spec_text = spec.canonical_text();
    g->mul_table.assign(size_t(n) * n, 0);
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++) {
            int c = a;
            for (int gix : word[b]) c = ce.gen_action[gix][c];
            g->mul_table[size_t(a) * n + b] = uint16_t(c);
        }
    for (int gix = 0; gix < k; gix++)
        g->generators.push_back({spec.gen_labels[gix], ce.gen_action[gix][0]});
    bfs_names(*g);
    finish_table(*g);
    return g;
}

} // namespace

// ---------------------------------------------------------------------------
// GroupSpec

std::string GroupSpec::canonical_text() const {
    switch (kind) {
        case Kind::Metacyclic: {
            std::ostringstream os;
            os << "metacyclic(m=" << m << ",n=" << n << ",f=" << f << ",e=" << e << ";"
               << s_label << "," << t_label << ")";
            return os.str();
        }
        case Kind::Cyclic:
            return "C:" + std::to_string(order);
        case Kind::Product:
            return "product(" + left->canonical_text() + "," + right->canonical_text() + ")";
        case Kind::Permutations: {
            std::ostringstream os;
            os << "perms(deg=" << degree;
            for (const auto& p : perm_gens) {
                os << ";";
                for (size_t i = 0; i < p.size(); i++) os << (i ? "," : "") << p[i];
            }
            os << ")";
            return os.str();
        }
        case Kind::Presentation: {
            std::ostringstream os;
            os << "pres(";
            for (size_t i = 0; i < gen_labels.size(); i++) os << (i ? "," : "") << gen_labels[i];
            os << "|";
            for (size_t i = 0; i < relators.size(); i++) os << (i ? "," : "") << relators[i];
            os << ")";
            return os.str();
        }
    }
    return "?";
}

GroupSpec GroupSpec::qa(int n) {
    if (n < 4) fail(ErrorCode::InvalidSpec, "QA_n requires n >= 4");
    if (n > 11) fail(ErrorCode::CapExceeded, "QA_n too large to tabulate");
    GroupSpec s;
    s.kind = Kind::Metacyclic;
    s.m = 1LL << (n - 1);
    s.n = 2;
    s.f = 0;
    s.e = (1LL << (n - 2)) + 1;
    s.s_label = "x";
    s.t_label = "y";
    return s;
}

GroupSpec GroupSpec::kn(int n) {
    if (n < 4) fail(ErrorCode::InvalidSpec, "K_n requires n >= 4");
    if (n > 10) fail(ErrorCode::CapExceeded, "K_n too large to tabulate");
    GroupSpec s;
    s.kind = Kind::Metacyclic;
    s.m = 8;
    s.n = 1LL << (n - 2);
    s.f = 4;
    s.e = (n % 2 == 0) ? 7 : 3;  // a^-1 for n even, a^3 for n odd
    s.s_label = "a";
    s.t_label = "b";
    return s;
}

GroupSpec GroupSpec::g1() {
    GroupSpec s;
    s.kind = Kind::Presentation;
    s.gen_labels = {"a", "b", "c"};
    s.relators = {"a^4", "b^4*a^-2", "c^2*a", "b*a*b^-1*a", "a^-1*c^-1*a*c", "c*b*c^-1*b^-3*a"};
    return s;
}

GroupSpec GroupSpec::cyclic(long long m) {
    GroupSpec s;
    s.kind = Kind::Cyclic;
    s.order = m;
    return s;
}

GroupSpec GroupSpec::cxc(long long m, long long k) {
    return product(cyclic(m), cyclic(k));
}

GroupSpec GroupSpec::q8() {
    GroupSpec s;
    s.kind = Kind::Metacyclic;
    s.m = 4;
    s.n = 2;
    s.f = 2;
    s.e = 3;
    s.s_label = "i";
    s.t_label = "j";
    return s;
}

GroupSpec GroupSpec::product(GroupSpec a, GroupSpec b) {
    GroupSpec s;
    s.kind = Kind::Product;
    s.left = std::make_shared<GroupSpec>(std::move(a));
    s.right = std::make_shared<GroupSpec>(std::move(b));
    return s;
}

static GroupSpec spec_from_json(const nlohmann::json& j);

static GroupSpec parse_named(const std::string& text) {
    auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
    if (text == "trivial") return GroupSpec::cyclic(1);
    if (text == "G1") return GroupSpec::g1();
    if (text == "Q8") return GroupSpec::q8();
    if (text == "C2xQ8") return GroupSpec::product(GroupSpec::cyclic(2), GroupSpec::q8());
    if (starts("QA:")) return GroupSpec::qa(std::stoi(text.substr(3)));
    if (starts("K:")) return GroupSpec::kn(std::stoi(text.substr(2)));
    if (starts("CxC:")) {
        auto rest = text.substr(4);
        auto comma = rest.find(',');
        if (comma == std::string::npos) fail(ErrorCode::ParseError, "CxC:m,k expected");
        return GroupSpec::cxc(std::stoll(rest.substr(0, comma)), std::stoll(rest.substr(comma + 1)));
    }
    if (starts("C:")) return GroupSpec::cyclic(std::stoll(text.substr(2)));
    fail(ErrorCode::ParseError, "unknown group spec '" + text + "'");
}

GroupSpec GroupSpec::parse(const std::string& text) {
    std::string t = text;
    // trim
    while (!t.empty() && isspace((unsigned char)t.front())) t.erase(t.begin());
    while (!t.empty() && isspace((unsigned char)t.back())) t.pop_back();
    if (!t.empty() && t[0] == '{') {
        nlohmann::json j = nlohmann::json::parse(t);
        return spec_from_json(j);
    }
    return parse_named(t);
}

static GroupSpec spec_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "named") return GroupSpec::parse(j.at("name").get<std::string>());
    if (kind == "cyclic") return GroupSpec::cyclic(j.at("order").get<long long>());
    if (kind == "metacyclic") {
        GroupSpec s;
        s.kind = GroupSpec::Kind::Metacyclic;
        s.m = j.at("m").get<long long>();
        s.n = j.at("n").get<long long>();
        s.f = j.value("f", 0LL);
        s.e = j.value("e", 1LL);
        if (j.contains("labels")) {
            s.s_label = j["labels"][0].get<std::string>();
            s.t_label = j["labels"][1].get<std::string>();
        }
        return s;
    }
    if (kind == "presentation") {
        GroupSpec s;
        s.kind = GroupSpec::Kind::Presentation;
        s.gen_labels = j.at("generators").get<std::vector<std::string>>();
        s.relators = j.at("relators").get<std::vector<std::string>>();
        s.coset_cap = j.value("coset_cap", 100000LL);
        return s;
    }
    if (kind == "perms") {
        GroupSpec s;
        s.kind = GroupSpec::Kind::Permutations;
        s.degree = j.at("degree").get<int>();
        s.perm_gens = j.at("generators").get<std::vector<std::vector<int>>>();
        if (j.contains("labels")) s.perm_labels = j["labels"].get<std::vector<std::string>>();
        return s;
    }
    if (kind == "product")
        return GroupSpec::product(spec_from_json(j.at("left")), spec_from_json(j.at("right")));
    fail(ErrorCode::ParseError, "unknown spec kind '" + kind + "'");
}

GroupPtr materialize_group(const GroupSpec& spec) {
    switch (spec.kind) {
        case GroupSpec::Kind::Metacyclic: return build_metacyclic(spec);
        case GroupSpec::Kind::Cyclic: return build_cyclic(spec.order);
        case GroupSpec::Kind::Product: return build_product(spec);
        case GroupSpec::Kind::Permutations: return build_from_perms(spec);
        case GroupSpec::Kind::Presentation: return build_from_presentation(spec);
    }
    fail(ErrorCode::InvalidSpec, "unhandled spec kind");
}

// ---------------------------------------------------------------------------
// Closure, subgroups

std::vector<int> closure(const GroupTable& g, const std::vector<int>& gens) {
    std::vector<char> in(g.order, 0);
    std::vector<int> elems{g.identity};
    in[g.identity] = 1;
    for (size_t head = 0; head < elems.size(); head++)
        for (int s : gens) {
            int u = g.mul(elems[head], s);
            if (!in[u]) {
                in[u] = 1;
                elems.push_back(u);
            }
        }
    std::sort(elems.begin(), elems.end());
    return elems;
}

Subgroup subgroup_generated(GroupPtr g, const std::vector<int>& gens) {
    for (int e : gens)
        if (e < 0 || e >= g->order) fail(ErrorCode::InvalidSpec, "generator index out of range");
    Subgroup h;
    h.parent = g;
    h.gens = gens;
    h.elements = closure(*g, gens);
    return h;
}

Mod2Quotient mod2_quotient(const GroupTable& g) {
    // N = <all squares>; the quotient is elementary abelian 2 (it kills every
    // square, hence is abelian of exponent 2), so N also absorbs [G,G].
    std::vector<int> ngens;
    for (int a = 0; a < g.order; a++) ngens.push_back(g.mul(a, a));
    std::vector<int> N = closure(g, ngens);

    std::vector<int> coset_of(g.order, -1);
    std::vector<int> reps;
    for (int e = 0; e < g.order; e++) {
        if (coset_of[e] >= 0) continue;
        int id = int(reps.size());
        reps.push_back(e);
        for (int x : N) coset_of[g.mul(e, x)] = id;
    }
    int q = int(reps.size());
    std::vector<int> basis;
    std::vector<int> coord_of(q, -1);
    coord_of[coset_of[g.identity]] = 0;
    std::vector<int> known{coset_of[g.identity]};
    for (int c = 0; c < q; c++) {
        if (coord_of[c] >= 0) continue;
        int bit = int(basis.size());
        basis.push_back(c);
        std::vector<int> added;
        for (int k : known) {
            int prod = coset_of[g.mul(reps[k], reps[c])];
            if (coord_of[prod] < 0) {
                coord_of[prod] = coord_of[k] | (1 << bit);
                added.push_back(prod);
            }
        }
        known.insert(known.end(), added.begin(), added.end());
    }
    Mod2Quotient mq;
    mq.dim = int(basis.size());
    mq.coords.assign(g.order, 0);
    for (int e = 0; e < g.order; e++) mq.coords[e] = uint32_t(coord_of[coset_of[e]]);
    return mq;
}

std::vector<Subgroup> index_two_subgroups(GroupPtr g) {
    std::vector<Subgroup> out;
    if (g->order % 2 != 0) return out;

    // index-two subgroups of G are the pullbacks of hyperplanes of the
    // elementary abelian quotient G/<squares>
    Mod2Quotient mq = mod2_quotient(*g);
    int d = mq.dim;
    for (int phi = 1; phi < (1 << d); phi++) {
        Subgroup h;
        h.parent = g;
        for (int e = 0; e < g->order; e++)
            if (__builtin_parity(mq.coords[e] & uint32_t(phi)) == 0) h.elements.push_back(e);
        std::sort(h.elements.begin(), h.elements.end());
        // verified closed of index 2
        if (int(h.elements.size()) * 2 != g->order)
            fail(ErrorCode::InvalidSpec, "index-two kernel has wrong size");
        for (int a : h.elements)
            for (int b : h.elements)
                if (!h.contains(g->mul(a, b)))
                    fail(ErrorCode::InvalidSpec, "index-two kernel not closed");
        h.gens = minimal_generating_tuple_of_subset(*g, h.elements);
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// small helper used above; declared here to keep the header lean
static std::vector<int> minimal_generating_tuple_of_subset(const GroupTable& g,
                                                           const std::vector<int>& elems) {
    // greedy: repeatedly add the least element not yet generated
    std::vector<int> gens;
    std::vector<int> cur{g.identity};
    while (cur.size() < elems.size()) {
        for (int e : elems)
            if (!std::binary_search(cur.begin(), cur.end(), e)) {
                gens.push_back(e);
                break;
            }
        cur = closure(g, gens);
    }
    return gens;
}

std::vector<Subgroup> all_subgroups(GroupPtr g) {
    std::set<std::vector<int>> seen;
    std::vector<Subgroup> out;
    std::vector<std::vector<int>> frontier;
    std::vector<int> triv{g->identity};
    seen.insert(triv);
    frontier.push_back(triv);
    out.push_back(subgroup_generated(g, {}));
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& elems : frontier) {
            for (int e = 0; e < g->order; e++) {
                if (std::binary_search(elems.begin(), elems.end(), e)) continue;
                std::vector<int> gens = elems;
                gens.push_back(e);
                std::vector<int> ext = closure(*g, gens);
                if (seen.insert(ext).second) {
                    Subgroup h;
                    h.parent = g;
                    h.elements = ext;
                    h.gens = minimal_generating_tuple_of_subset(*g, ext);
                    out.push_back(h);
                    next.push_back(ext);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

GroupPtr subgroup_as_group(const Subgroup& h, std::vector<int>* to_parent) {
    const GroupTable& p = *h.parent;
    int n = h.order();
    std::vector<int> back(p.order, -1);
    for (int i = 0; i < n; i++) back[h.elements[i]] = i;
    auto g = std::make_shared<GroupTable>();
    g->order = n;
    g->spec_text = "subgroup(" + p.spec_text + ",order=" + std::to_string(n) + ")";
    g->mul_table.assign(size_t(n) * n, 0);
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++) {
            int prod = p.mul(h.elements[a], h.elements[b]);
            g->mul_table[size_t(a) * n + b] = uint16_t(back[prod]);
        }
    g->identity = back[p.identity];
    for (size_t k = 0; k < h.gens.size(); k++)
        g->generators.push_back({"g" + std::to_string(k), back[h.gens[k]]});
    g->names.assign(n, "");
    for (int i = 0; i < n; i++) g->names[i] = p.names[h.elements[i]];
    finish_table(*g);
    if (to_parent) *to_parent = h.elements;
    return g;
}

// ---------------------------------------------------------------------------
// Homomorphism extension, automorphisms, isomorphism

namespace {

// Extends gens -> images to a homomorphism G -> H by walking G's Cayley
// graph; returns the full image vector or nullopt on inconsistency.
std::optional<std::vector<uint16_t>> extend_hom(const GroupTable& g, const std::vector<int>& gens,
                                                const GroupTable& h, const std::vector<int>& images) {
    std::vector<int> phi(g.order, -1);
    phi[g.identity] = h.identity;
    std::vector<int> work{g.identity};
    while (!work.empty()) {
        int e = work.back();
        work.pop_back();
        for (size_t k = 0; k < gens.size(); k++) {
            int u = g.mul(e, gens[k]);
            int v = h.mul(phi[e], images[k]);
            if (phi[u] < 0) {
                phi[u] = v;
                work.push_back(u);
            } else if (phi[u] != v) {
                return std::nullopt;
            }
        }
    }
    for (int e = 0; e < g.order; e++)
        if (phi[e] < 0) return std::nullopt;  // gens do not generate
    // consistency on all pairs follows from the graph walk only for the
    // products e*gen; verify the full table to be safe against subtle cases
    // where the walk order might mask a clash
    for (size_t k = 0; k < gens.size(); k++)
        for (int e = 0; e < g.order; e++)
            if (phi[g.mul(e, gens[k])] != h.mul(phi[e], images[k])) return std::nullopt;
    return std::vector<uint16_t>(phi.begin(), phi.end());
}

bool full_hom_check(const GroupTable& g, const GroupTable& h, const std::vector<uint16_t>& phi) {
    for (int a = 0; a < g.order; a++)
        for (int b = 0; b < g.order; b++)
            if (phi[g.mul(a, b)] != h.mul(phi[a], phi[b])) return false;
    return true;
}

bool is_bijective(const std::vector<uint16_t>& phi, int order) {
    std::vector<char> hit(order, 0);
    for (int v : phi) {
        if (hit[v]) return false;
        hit[v] = 1;
    }
    return true;
}

void tuple_search(const std::vector<std::vector<int>>& candidates,
                  const std::function<void(const std::vector<int>&)>& leaf) {
    size_t k = candidates.size();
    if (k == 0) {
        leaf({});
        return;
    }
    for (const auto& c : candidates)
        if (c.empty()) return;
    std::vector<size_t> idx(k, 0);
    std::vector<int> tuple(k);
    for (size_t i = 0; i < k; i++) tuple[i] = candidates[i][0];
    while (true) {
        leaf(tuple);
        size_t pos = 0;
        while (pos < k) {
            idx[pos]++;
            if (idx[pos] < candidates[pos].size()) {
                tuple[pos] = candidates[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = candidates[pos][0];
            pos++;
        }
        if (pos == k) return;
    }
}

// injective-homomorphism variant used by embeds()
std::optional<std::vector<uint16_t>> extend_hom_injective(const GroupTable& g,
                                                          const std::vector<int>& gens,
                                                          const GroupTable& h,
                                                          const std::vector<int>& images) {
    auto phi = extend_hom(g, gens, h, images);
    if (!phi) return std::nullopt;
    std::vector<char> hit(h.order, 0);
    for (int v : *phi) {
        if (hit[v]) return std::nullopt;
        hit[v] = 1;
    }
    return phi;
}

} // namespace

std::vector<int> minimal_generating_tuple(const GroupTable& g) {
    if (g.order == 1) return {};
    for (int e = 0; e < g.order; e++)
        if (int(closure(g, {e}).size()) == g.order) return {e};
    for (int a = 0; a < g.order; a++)
        for (int b = a + 1; b < g.order; b++)
            if (int(closure(g, {a, b}).size()) == g.order) return {a, b};
    for (int a = 0; a < g.order; a++)
        for (int b = a + 1; b < g.order; b++)
            for (int c = b + 1; c < g.order; c++)
                if (int(closure(g, {a, b, c}).size()) == g.order) return {a, b, c};
    for (int a = 0; a < g.order; a++)
        for (int b = a + 1; b < g.order; b++)
            for (int c = b + 1; c < g.order; c++)
                for (int d = c + 1; d < g.order; d++)
                    if (int(closure(g, {a, b, c, d}).size()) == g.order) return {a, b, c, d};
    fail(ErrorCode::CapExceeded, "group needs more than 4 generators");
}

std::vector<Automorphism> automorphism_group(const GroupTable& g, int cap) {
    if (g.order > cap) fail(ErrorCode::CapExceeded, "automorphism_group cap exceeded");
    std::vector<int> gens = minimal_generating_tuple(g);
    if (gens.empty()) return {Automorphism{{uint16_t(0)}}};
    std::vector<std::vector<int>> candidates;
    for (int s : gens) candidates.push_back(g.elements_of_order(g.order_of(s)));
    std::vector<Automorphism> out;
    tuple_search(candidates, [&](const std::vector<int>& images) {
        auto phi = extend_hom(g, gens, g, images);
        if (phi && is_bijective(*phi, g.order)) out.push_back(Automorphism{*phi});
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool is_isomorphic(const GroupTable& g, const GroupTable& h, int cap) {
    if (g.order > cap || h.order > cap) fail(ErrorCode::CapExceeded, "is_isomorphic cap exceeded");
    if (g.order != h.order) return false;
    // order-spectrum pruning
    std::vector<int> sg = g.elt_order, sh = h.elt_order;
    std::sort(sg.begin(), sg.end());
    std::sort(sh.begin(), sh.end());
    if (sg != sh) return false;
    std::vector<int> gens = minimal_generating_tuple(g);
    if (gens.empty()) return true;
    std::vector<std::vector<int>> candidates;
    for (int s : gens) candidates.push_back(h.elements_of_order(g.order_of(s)));
    bool found = false;
    tuple_search(candidates, [&](const std::vector<int>& images) {
        if (found) return;
        auto phi = extend_hom(g, gens, h, images);
        if (phi && is_bijective(*phi, g.order)) found = true;
    });
    return found;
}

bool has_inverting_automorphism(const GroupTable& g, std::pair<int, int> pair) {
    std::vector<int> gens{pair.first, pair.second};
    if (int(closure(g, gens).size()) != g.order)
        fail(ErrorCode::NotGenerating, "pair does not generate the group");
    auto phi = extend_hom(g, gens, g, {g.inv(pair.first), g.inv(pair.second)});
    return phi && is_bijective(*phi, g.order) && full_hom_check(g, g, *phi);
}

bool embeds(const GroupTable& g, const GroupTable& h) {
    if (h.order % g.order != 0) return false;
    std::vector<int> gspec = g.order_spectrum_set(), hspec = h.order_spectrum_set();
    for (int o : gspec)
        if (!std::binary_search(hspec.begin(), hspec.end(), o)) return false;
    if (g.order == h.order) return is_isomorphic(g, h);
    std::vector<int> gens = minimal_generating_tuple(g);
    if (gens.empty()) return true;
    std::vector<std::vector<int>> candidates;
    for (int s : gens) candidates.push_back(h.elements_of_order(g.order_of(s)));
    bool found = false;
    tuple_search(candidates, [&](const std::vector<int>& images) {
        if (found) return;
        auto phi = extend_hom_injective(g, gens, h, images);
        if (phi) found = true;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Profile

GroupProfile group_profile(GroupPtr gp) {
    const GroupTable& g = *gp;
    GroupProfile pr;
    pr.order = g.order;
    std::map<int, int> spectrum;
    long long exponent = 1;
    for (int e = 0; e < g.order; e++) {
        spectrum[g.order_of(e)]++;
        exponent = std::lcm(exponent, (long long)g.order_of(e));
    }
    pr.exponent = int(exponent);
    for (auto& [o, c] : spectrum) pr.order_spectrum.push_back({o, c});
    pr.involution_count = spectrum.count(2) ? spectrum[2] : 0;

    std::vector<int> central;
    for (int e = 0; e < g.order; e++) {
        bool c = true;
        for (int a = 0; a < g.order && c; a++)
            if (g.mul(e, a) != g.mul(a, e)) c = false;
        if (c) central.push_back(e);
    }
    pr.center = subgroup_generated(gp, central);
    pr.abelian = (int(central.size()) == g.order);

    std::vector<char> seen(g.order, 0);
    for (int e = 0; e < g.order; e++) {
        if (seen[e]) continue;
        std::set<int> cls;
        for (int a = 0; a < g.order; a++) cls.insert(g.conj(e, a));
        std::vector<int> cv(cls.begin(), cls.end());
        for (int x : cv) seen[x] = 1;
        pr.conjugacy_classes.push_back(cv);
    }
    pr.conjugacy_class_count = int(pr.conjugacy_classes.size());
    return pr;
}

// ---------------------------------------------------------------------------
// Element word parsing

int parse_element(const GroupTable& g, const std::string& word) {
    std::string w = word;
    size_t pos = 0;
    auto skip_sep = [&] {
        while (pos < w.size() && (w[pos] == '*' || w[pos] == ' ')) pos++;
    };
    skip_sep();
    if (pos < w.size() && w[pos] == '1' && (pos + 1 == w.size())) return g.identity;
    int acc = g.identity;
    while (pos < w.size()) {
        size_t start = pos;
        while (pos < w.size() && (isalnum((unsigned char)w[pos]) || w[pos] == '_' || w[pos] == '\''))
            pos++;
        std::string label = w.substr(start, pos - start);
        if (label.empty()) fail(ErrorCode::ParseError, "bad element word '" + word + "'");
        long long exp = 1;
        if (pos < w.size() && w[pos] == '^') {
            pos++;
            size_t es = pos;
            if (pos < w.size() && w[pos] == '-') pos++;
            while (pos < w.size() && isdigit((unsigned char)w[pos])) pos++;
            if (es == pos) fail(ErrorCode::ParseError, "bad exponent in '" + word + "'");
            exp = std::stoll(w.substr(es, pos - es));
        }
        int e = (label == "1") ? g.identity : g.generator(label);
        acc = g.mul(acc, g.pow(e, exp));
        skip_sep();
    }
    return acc;
}

} // namespace qan
