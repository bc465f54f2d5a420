#include "qan/signature.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qan/error.hpp"

namespace qan {

// ---------------------------------------------------------------------------
// Canonical form

static std::vector<int> canonical_cycle(const std::vector<int>& c) {
    if (c.size() <= 1) return c;
    std::vector<int> best = c;
    std::vector<int> cur = c;
    for (int rev = 0; rev < 2; rev++) {
        for (size_t r = 0; r < cur.size(); r++) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            if (cur < best) best = cur;
        }
        std::reverse(cur.begin(), cur.end());
    }
    return best;
}

Signature Signature::canonical() const {
    Signature s = *this;
    std::sort(s.periods.begin(), s.periods.end());
    for (auto& c : s.cycles) c = canonical_cycle(c);
    std::sort(s.cycles.begin(), s.cycles.end());
    return s;
}

bool Signature::is_canonical() const { return *this == canonical(); }

bool Signature::operator<(const Signature& o) const {
    if (orientable != o.orientable) return orientable > o.orientable;  // '+' first
    if (genus != o.genus) return genus < o.genus;
    if (periods != o.periods) return periods < o.periods;
    return cycles < o.cycles;
}

std::string Signature::str() const {
    std::ostringstream os;
    os << "(" << genus << ";" << (orientable ? "+" : "-") << ";[";
    if (periods.empty()) os << "-";
    for (size_t i = 0; i < periods.size(); i++) os << (i ? "," : "") << periods[i];
    os << "];{";
    if (cycles.empty()) os << "-";
    for (size_t i = 0; i < cycles.size(); i++) {
        os << (i ? "," : "") << "(";
        if (cycles[i].empty()) os << "-";
        for (size_t j = 0; j < cycles[i].size(); j++) os << (j ? "," : "") << cycles[i][j];
        os << ")";
    }
    os << "})";
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && isspace((unsigned char)s[pos])) pos++;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            pos++;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            fail(ErrorCode::ParseError,
                 "expected '" + std::string(1, c) + "' at position " + std::to_string(pos) +
                     " in signature '" + s + "'");
    }
    int integer() {
        skip();
        size_t start = pos;
        if (pos < s.size() && s[pos] == '-') pos++;
        while (pos < s.size() && isdigit((unsigned char)s[pos])) pos++;
        if (start == pos) fail(ErrorCode::ParseError, "expected integer in signature '" + s + "'");
        return std::stoi(s.substr(start, pos - start));
    }
};

std::vector<int> parse_int_list(Cursor& c, char close) {
    std::vector<int> out;
    c.skip();
    if (c.eat('-')) return out;
    while (true) {
        out.push_back(c.integer());
        c.skip();
        if (!c.eat(',')) break;
    }
    (void)close;
    return out;
}

} // namespace

Signature Signature::parse(const std::string& text) {
    Cursor c{text};
    Signature sig;
    c.expect('(');
    sig.genus = c.integer();
    c.expect(';');
    c.skip();
    if (c.eat('+')) sig.orientable = true;
    else if (c.eat('-')) sig.orientable = false;
    else fail(ErrorCode::ParseError, "expected sign in signature '" + text + "'");
    c.expect(';');
    c.expect('[');
    sig.periods = parse_int_list(c, ']');
    c.expect(']');
    c.expect(';');
    c.expect('{');
    c.skip();
    if (!c.eat('-')) {
        while (true) {
            c.expect('(');
            sig.cycles.push_back(parse_int_list(c, ')'));
            c.expect(')');
            c.skip();
            if (!c.eat(',')) break;
        }
    }
    c.expect('}');
    c.expect(')');
    for (int m : sig.periods)
        if (m < 2) fail(ErrorCode::ParseError, "proper period < 2 in '" + text + "'");
    for (const auto& cy : sig.cycles)
        for (int n : cy)
            if (n < 2) fail(ErrorCode::ParseError, "cycle period < 2 in '" + text + "'");
    if (!sig.orientable && sig.genus < 1)
        fail(ErrorCode::ParseError, "non-orientable signature needs genus >= 1");
    if (sig.genus < 0) fail(ErrorCode::ParseError, "negative genus");
    return sig;
}

// ---------------------------------------------------------------------------
// Area, existence, Fuchsian subgroup, Riemann-Hurwitz

Rational reduced_area(const Signature& sig) {
    int eta = sig.orientable ? 2 : 1;
    Rational a(eta * (long long)sig.genus + (long long)sig.cycles.size() - 2);
    for (int m : sig.periods) a += Rational(m - 1, m);
    for (const auto& cy : sig.cycles)
        for (int n : cy) a += Rational(n - 1, 2LL * n);
    return a;
}

bool exists(const Signature& sig) { return reduced_area(sig) > Rational(0); }

Signature canonical_fuchsian_signature(const Signature& sig) {
    if (sig.is_fuchsian())
        fail(ErrorCode::NotProperNEC, "signature " + sig.str() + " is already Fuchsian");
    int eta = sig.orientable ? 2 : 1;
    Signature out;
    out.orientable = true;
    out.genus = eta * sig.genus + int(sig.cycles.size()) - 1;
    for (int m : sig.periods) {
        out.periods.push_back(m);
        out.periods.push_back(m);
    }
    for (const auto& cy : sig.cycles)
        for (int n : cy) out.periods.push_back(n);
    out = out.canonical();
    if (reduced_area(out) != reduced_area(sig) * Rational(2))
        fail(ErrorCode::InvalidSpec, "canonical Fuchsian subgroup area mismatch for " + sig.str());
    return out;
}

long long genus_from_action(const Signature& sig, long long group_order, SurfaceKind kind) {
    if (!exists(sig)) fail(ErrorCode::NonexistentSignature, sig.str() + " has area <= 0");
    Rational area = reduced_area(sig);
    Rational g = (kind == SurfaceKind::Riemann)
                     ? Rational(1) + Rational(group_order) * area / Rational(2)
                     : Rational(2) + Rational(group_order) * area;
    if (!g.is_integer())
        fail(ErrorCode::NonIntegralGenus, "order " + std::to_string(group_order) + " on " +
                                              sig.str() + " gives genus " + g.str());
    return g.as_integer();
}

// ---------------------------------------------------------------------------
// Canonical presentation

int Presentation::gen_index(const std::string& label) const {
    for (size_t i = 0; i < gens.size(); i++)
        if (gens[i].label == label) return int(i);
    fail(ErrorCode::ParseError, "no presentation generator named '" + label + "'");
}

std::string Presentation::word_str(const Word& w) const {
    if (w.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); i++) {
        os << (i ? "*" : "") << gens[w[i].first].label;
        if (w[i].second != 1) os << "^" << w[i].second;
    }
    return os.str();
}

Word Presentation::parse_word(const std::string& text) const {
    Word out;
    size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && (text[pos] == '*' || text[pos] == ' ')) pos++;
    };
    skip();
    while (pos < text.size()) {
        size_t start = pos;
        while (pos < text.size() && (isalnum((unsigned char)text[pos]) || text[pos] == '_')) pos++;
        std::string label = text.substr(start, pos - start);
        if (label == "1") {
            skip();
            continue;
        }
        int exp = 1;
        if (pos < text.size() && text[pos] == '^') {
            pos++;
            size_t es = pos;
            if (pos < text.size() && text[pos] == '-') pos++;
            while (pos < text.size() && isdigit((unsigned char)text[pos])) pos++;
            exp = std::stoi(text.substr(es, pos - es));
        }
        out.push_back({gen_index(label), exp});
        skip();
    }
    return out;
}

Presentation presentation_of(const Signature& s) {
    if (!exists(s)) fail(ErrorCode::NonexistentSignature, s.str() + " has area <= 0");
    Signature sig = s.canonical();
    Presentation p;
    p.sig = sig;
    int r = int(sig.periods.size());
    int k = int(sig.cycles.size());
    int h = sig.genus;

    for (int i = 0; i < r; i++)
        p.gens.push_back({"x" + std::to_string(i + 1), GenKind::Elliptic, +1, -1, i});
    std::vector<int> e_ix(k), c_ix0(k);
    for (int i = 0; i < k; i++) {
        e_ix[i] = int(p.gens.size());
        p.gens.push_back({"e" + std::to_string(i + 1), GenKind::Boundary, +1, i, -1});
        c_ix0[i] = int(p.gens.size());
        int si = int(sig.cycles[i].size());
        for (int j = 0; j <= si; j++)
            p.gens.push_back({"c" + std::to_string(i + 1) + "_" + std::to_string(j),
                              GenKind::Reflection, -1, i, j});
    }
    std::vector<int> handle_ix;
    for (int i = 0; i < h; i++) {
        if (sig.orientable) {
            handle_ix.push_back(int(p.gens.size()));
            p.gens.push_back({"a" + std::to_string(i + 1), GenKind::HyperbolicA, +1, -1, i});
            p.gens.push_back({"b" + std::to_string(i + 1), GenKind::HyperbolicB, +1, -1, i});
        } else {
            handle_ix.push_back(int(p.gens.size()));
            p.gens.push_back({"d" + std::to_string(i + 1), GenKind::Glide, -1, -1, i});
        }
    }

    // elliptic orders
    for (int i = 0; i < r; i++) {
        p.relations.push_back({{i, sig.periods[i]}});
        p.torsion.push_back({{{i, 1}}, sig.periods[i]});
    }
    // period cycles
    for (int i = 0; i < k; i++) {
        int si = int(sig.cycles[i].size());
        for (int j = 0; j <= si; j++) {
            p.relations.push_back({{c_ix0[i] + j, 2}});
            p.torsion.push_back({{{c_ix0[i] + j, 1}}, 2});
        }
        for (int j = 1; j <= si; j++) {
            int nij = sig.cycles[i][j - 1];
            Word w;  // (c_{i,j-1} c_{ij})^{n_ij}
            for (int t = 0; t < nij; t++) {
                w.push_back({c_ix0[i] + j - 1, 1});
                w.push_back({c_ix0[i] + j, 1});
            }
            p.relations.push_back(w);
            p.torsion.push_back({{{c_ix0[i] + j - 1, 1}, {c_ix0[i] + j, 1}}, nij});
        }
        // e_i c_i0 e_i^-1 c_i,si = 1
        p.relations.push_back(
            {{e_ix[i], 1}, {c_ix0[i], 1}, {e_ix[i], -1}, {c_ix0[i] + si, 1}});
    }
    // long relation
    Word lng;
    for (int i = 0; i < r; i++) lng.push_back({i, 1});
    for (int i = 0; i < k; i++) lng.push_back({e_ix[i], 1});
    for (int i = 0; i < h; i++) {
        if (sig.orientable) {
            int a = handle_ix[i], b = handle_ix[i] + 1;
            lng.push_back({a, 1});
            lng.push_back({b, 1});
            lng.push_back({a, -1});
            lng.push_back({b, -1});
        } else {
            lng.push_back({handle_ix[i], 2});
        }
    }
    p.relations.push_back(lng);
    return p;
}

// ---------------------------------------------------------------------------
// Enumerator

namespace {

struct Enum {
    const SignatureConstraints& c;
    std::vector<Signature> out;
    std::vector<int> periods;  // sorted allowed periods
    std::vector<std::vector<int>> canon_cycles_cache;  // canonical cycles by budget? generated on demand

    // all canonical cycles (including the empty one) with contribution <= budget,
    // sorted; contribution of cycle = 1/2 sum (1 - 1/n)
    std::vector<std::pair<std::vector<int>, Rational>> cycles_within(const Rational& budget) {
        std::vector<std::pair<std::vector<int>, Rational>> res;
        std::vector<int> cur;
        Rational acc(0);
        gen_cycles(cur, acc, budget, res);
        std::sort(res.begin(), res.end());
        return res;
    }

    void gen_cycles(std::vector<int>& cur, Rational acc, const Rational& budget,
                    std::vector<std::pair<std::vector<int>, Rational>>& res) {
        if (cur == canonical_cycle_local(cur)) res.push_back({cur, acc});
        for (int n : periods) {
            Rational nc = acc + Rational(n - 1, 2LL * n);
            if (nc > budget) continue;
            cur.push_back(n);
            gen_cycles(cur, nc, budget, res);
            cur.pop_back();
        }
    }

    static std::vector<int> canonical_cycle_local(const std::vector<int>& c) {
        if (c.size() <= 1) return c;
        std::vector<int> best = c, cur = c;
        for (int rev = 0; rev < 2; rev++) {
            for (size_t r = 0; r < cur.size(); r++) {
                std::rotate(cur.begin(), cur.begin() + 1, cur.end());
                if (cur < best) best = cur;
            }
            std::reverse(cur.begin(), cur.end());
        }
        return best;
    }

    void run() {
        for (int sign = 0; sign < 2; sign++) {
            bool orient = (sign == 0);
            if (c.sign_filter == +1 && !orient) continue;
            if (c.sign_filter == -1 && orient) continue;
            int eta = orient ? 2 : 1;
            int hmin = orient ? 0 : 1;
            for (int h = hmin;; h++) {
                Rational base0(eta * (long long)h - 2);
                if (base0 > c.max_reduced_area) break;
                int kmax = 0;
                if (!c.require_empty_boundary_quotient) {
                    while (base0 + Rational(kmax + 1) <= c.max_reduced_area) kmax++;
                }
                for (int k = 0; k <= kmax; k++) {
                    Rational base = base0 + Rational(k);
                    gen_periods(orient, h, k, base);
                }
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    void gen_periods(bool orient, int h, int k, const Rational& base) {
        std::vector<int> ps;
        rec_periods(orient, h, k, base, ps, 0);
    }

    void rec_periods(bool orient, int h, int k, const Rational& area, std::vector<int>& ps,
                     size_t min_ix) {
        emit_with_cycles(orient, h, k, area, ps);
        for (size_t i = min_ix; i < periods.size(); i++) {
            int m = periods[i];
            Rational na = area + Rational(m - 1, m);
            if (na > c.max_reduced_area) continue;
            ps.push_back(m);
            rec_periods(orient, h, k, na, ps, i);
            ps.pop_back();
        }
    }

    void emit_with_cycles(bool orient, int h, int k, const Rational& area,
                          const std::vector<int>& ps) {
        if (k == 0) {
            if (area > Rational(0)) {
                Signature s;
                s.orientable = orient;
                s.genus = h;
                s.periods = ps;
                out.push_back(s);
            }
            return;
        }
        Rational budget = c.max_reduced_area - area;
        if (budget < Rational(0)) return;
        auto cyc = c.allow_period_cycles
                       ? cycles_within(budget)
                       : std::vector<std::pair<std::vector<int>, Rational>>{{{}, Rational(0)}};
        rec_cycles(orient, h, k, area, ps, cyc, 0, 0, Rational(0));
    }

    std::vector<std::vector<int>> chosen;
    void rec_cycles(bool orient, int h, int k, const Rational& area, const std::vector<int>& ps,
                    const std::vector<std::pair<std::vector<int>, Rational>>& cyc, int at,
                    size_t min_ix, Rational acc) {
        if (at == k) {
            if (area + acc > Rational(0)) {
                Signature s;
                s.orientable = orient;
                s.genus = h;
                s.periods = ps;
                s.cycles = chosen;
                out.push_back(s);
            }
            return;
        }
        for (size_t i = min_ix; i < cyc.size(); i++) {
            Rational na = acc + cyc[i].second;
            if (area + na > c.max_reduced_area) continue;
            chosen.push_back(cyc[i].first);
            rec_cycles(orient, h, k, area, ps, cyc, at + 1, i, na);
            chosen.pop_back();
        }
    }
};

} // namespace

std::vector<Signature> enumerate_signatures(const SignatureConstraints& c) {
    if (!(c.max_reduced_area > Rational(0))) return {};
    for (int m : c.allowed_periods)
        if (m < 2) fail(ErrorCode::InvalidSpec, "allowed period < 2");
    Enum en{c};
    en.periods = c.allowed_periods;
    std::sort(en.periods.begin(), en.periods.end());
    en.periods.erase(std::unique(en.periods.begin(), en.periods.end()), en.periods.end());
    en.run();
    return en.out;
}

} // namespace qan
