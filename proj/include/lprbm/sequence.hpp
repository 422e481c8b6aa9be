#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lprbm/geometry.hpp"

namespace lprbm {

inline constexpr int kAlphabetSize = 20;
inline constexpr char kAlphabet[kAlphabetSize + 1] = "ACDEFGHIKLMNPQRSTVWY";

using Sequence = std::vector<std::uint8_t>;

int residue_from_letter(char c);  // -1 if unknown
inline char residue_letter(int a) { return kAlphabet[a]; }

std::string sequence_to_string(const Sequence& seq);
Sequence sequence_from_string(std::string_view s);  // throws on bad symbol

// lattice-protein sequences are exactly 27 residues
void validate_chain_sequence(const Sequence& seq);

int hamming_distance(const Sequence& a, const Sequence& b);

}  // namespace lprbm
