#include "lprbm/sequence.hpp"

#include <stdexcept>

namespace lprbm {

int residue_from_letter(char c) {
  for (int a = 0; a < kAlphabetSize; ++a)
    if (kAlphabet[a] == c) return a;
  return -1;
}

std::string sequence_to_string(const Sequence& seq) {
  std::string s;
  s.reserve(seq.size());
  for (std::uint8_t a : seq) {
    if (a >= kAlphabetSize) throw std::out_of_range("residue code out of range");
    s.push_back(kAlphabet[a]);
  }
  return s;
}

Sequence sequence_from_string(std::string_view s) {
  Sequence seq;
  seq.reserve(s.size());
  for (char c : s) {
    const int a = residue_from_letter(c);
    if (a < 0) throw std::invalid_argument(std::string("unknown residue letter: ") + c);
    seq.push_back(static_cast<std::uint8_t>(a));
  }
  return seq;
}

void validate_chain_sequence(const Sequence& seq) {
  if (static_cast<int>(seq.size()) != kChainLength)
    throw std::invalid_argument("sequence length must be 27");
  for (std::uint8_t a : seq)
    if (a >= kAlphabetSize) throw std::invalid_argument("residue code out of range");
}

int hamming_distance(const Sequence& a, const Sequence& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace lprbm
