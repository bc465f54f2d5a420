#pragma once

#include <string>
#include <vector>

namespace qan {

// Bounded HLT-style Todd-Coxeter over the trivial subgroup. Letters encode
// generator g as 2g and g^-1 as 2g+1. Throws CosetCapExceeded when more than
// `cap` cosets get defined before the table closes.
struct CosetEnumResult {
    int ncosets = 0;
    // gen_action[g][c] = image of coset c under right multiplication by generator g
    std::vector<std::vector<int>> gen_action;
};

CosetEnumResult coset_enumerate(int ngens, const std::vector<std::vector<int>>& relator_letters,
                                long long cap);

// "b^4*a^-2" over labels {a,b} -> letter string (2*1,2*1,2*1,2*1, 2*0+1,2*0+1)
std::vector<int> parse_relator(const std::vector<std::string>& labels, const std::string& word);

} // namespace qan
