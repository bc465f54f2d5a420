#include "qan/coset_enum.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "qan/error.hpp"

namespace qan {

namespace {

struct Enumerator {
    int ncols;
    long long cap;
    std::vector<std::vector<int>> table;  // table[coset][letter], -1 undefined
    std::vector<int> p;                   // union-find for coincidences
    std::deque<int> merge_queue;
    long long defined = 1;

    Enumerator(int ngens, long long cap_) : ncols(2 * ngens), cap(cap_) {
        table.push_back(std::vector<int>(ncols, -1));
        p.push_back(0);
    }

    static int inv_letter(int x) { return x ^ 1; }

    int rep(int k) {
        int r = k;
        while (p[r] != r) r = p[r];
        while (p[k] != r) { int next = p[k]; p[k] = r; k = next; }
        return r;
    }

    void merge(int k, int l) {
        k = rep(k); l = rep(l);
        if (k == l) return;
        int mu = std::min(k, l), nu = std::max(k, l);
        p[nu] = mu;
        merge_queue.push_back(nu);
    }

    void coincidence(int a, int b) {
        merge(a, b);
        while (!merge_queue.empty()) {
            int gamma = merge_queue.front();
            merge_queue.pop_front();
            for (int x = 0; x < ncols; x++) {
                int delta = table[gamma][x];
                if (delta < 0) continue;
                table[delta][inv_letter(x)] = -1;
                int mu = rep(gamma), nu = rep(delta);
                if (table[mu][x] >= 0) merge(nu, table[mu][x]);
                else table[mu][x] = nu;
                if (table[nu][inv_letter(x)] >= 0) merge(mu, table[nu][inv_letter(x)]);
                else table[nu][inv_letter(x)] = mu;
            }
        }
    }

    int define(int a, int x) {
        if (defined >= cap)
            fail(ErrorCode::CosetCapExceeded,
                 "coset enumeration exceeded cap of " + std::to_string(cap));
        defined++;
        int b = int(table.size());
        table.push_back(std::vector<int>(ncols, -1));
        p.push_back(b);
        table[a][x] = b;
        table[b][inv_letter(x)] = a;
        return b;
    }

    // HLT scan of one relator at one coset, filling gaps by new definitions.
    void scan_and_fill(int a, const std::vector<int>& w) {
        int f = a, i = 0;
        int b = a, j = int(w.size()) - 1;
        while (true) {
            while (i <= j && table[f][w[i]] >= 0) f = table[f][w[i++]];
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i && table[b][inv_letter(w[j])] >= 0) b = table[b][inv_letter(w[j--])];
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (i == j) {  // deduction closes the scan
                table[f][w[i]] = b;
                table[b][inv_letter(w[i])] = f;
                return;
            }
            f = define(f, w[i++]);
        }
    }
};

} // namespace

CosetEnumResult coset_enumerate(int ngens, const std::vector<std::vector<int>>& relators,
                                long long cap) {
    Enumerator en(ngens, cap);
    for (size_t a = 0; a < en.table.size(); a++) {
        if (en.rep(int(a)) != int(a)) continue;
        for (const auto& w : relators) {
            if (en.rep(int(a)) != int(a)) break;
            en.scan_and_fill(int(a), w);
        }
        if (en.rep(int(a)) != int(a)) continue;
        for (int x = 0; x < en.ncols; x++)
            if (en.table[a][x] < 0) en.define(int(a), x);
    }

    // compact live cosets
    std::vector<int> live;
    for (size_t a = 0; a < en.table.size(); a++)
        if (en.rep(int(a)) == int(a)) live.push_back(int(a));
    std::vector<int> renum(en.table.size(), -1);
    for (size_t i = 0; i < live.size(); i++) renum[live[i]] = int(i);

    CosetEnumResult res;
    res.ncosets = int(live.size());
    res.gen_action.assign(ngens, std::vector<int>(res.ncosets, -1));
    for (size_t i = 0; i < live.size(); i++) {
        for (int g = 0; g < ngens; g++) {
            int img = en.table[live[i]][2 * g];
            if (img < 0) fail(ErrorCode::CosetCapExceeded, "coset table failed to close");
            res.gen_action[g][i] = renum[en.rep(img)];
        }
    }
    return res;
}

std::vector<int> parse_relator(const std::vector<std::string>& labels, const std::string& word) {
    std::vector<int> letters;
    size_t pos = 0;
    auto skip_sep = [&] {
        while (pos < word.size() && (word[pos] == '*' || word[pos] == ' ')) pos++;
    };
    skip_sep();
    while (pos < word.size()) {
        size_t start = pos;
        while (pos < word.size() && (isalnum(word[pos]) || word[pos] == '_')) pos++;
        std::string label = word.substr(start, pos - start);
        long long exp = 1;
        if (pos < word.size() && word[pos] == '^') {
            pos++;
            size_t es = pos;
            if (pos < word.size() && word[pos] == '-') pos++;
            while (pos < word.size() && isdigit(word[pos])) pos++;
            exp = std::stoll(word.substr(es, pos - es));
        }
        int g = -1;
        for (size_t i = 0; i < labels.size(); i++)
            if (labels[i] == label) { g = int(i); break; }
        if (g < 0) fail(ErrorCode::ParseError, "unknown generator '" + label + "' in relator " + word);
        int letter = exp >= 0 ? 2 * g : 2 * g + 1;
        for (long long k = 0; k < std::llabs(exp); k++) letters.push_back(letter);
        skip_sep();
    }
    if (letters.empty()) fail(ErrorCode::ParseError, "empty relator");
    return letters;
}

} // namespace qan
