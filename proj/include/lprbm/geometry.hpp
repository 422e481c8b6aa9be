#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace lprbm {

inline constexpr int kChainLength = 27;
inline constexpr int kNumMoves = 26;
inline constexpr int kCubeSide = 3;
inline constexpr int kNumContacts = 28;  // 54 cube edges - 26 chain bonds

// Move codes are ordered so that code order equals ASCII order of the move
// letters; canonical (minimal) move sequences therefore sort the same way as
// the text lines in a fold file.
//   0:B(-z) 1:D(-y) 2:F(+z) 3:L(-x) 4:R(+x) 5:U(+y)
inline constexpr char kMoveLetters[6] = {'B', 'D', 'F', 'L', 'R', 'U'};
inline constexpr int kMoveAxis[6] = {2, 1, 2, 0, 0, 1};
inline constexpr int kMoveSign[6] = {-1, -1, +1, -1, +1, +1};
inline constexpr int kMoveNegation[6] = {2, 5, 0, 4, 3, 1};

int move_from_letter(char c);  // -1 if not a move letter

struct Vec3 {
  std::int8_t x = 0, y = 0, z = 0;
  bool operator==(const Vec3&) const = default;
};

inline Vec3 apply_move(Vec3 p, int m) {
  switch (kMoveAxis[m]) {
    case 0: p.x = static_cast<std::int8_t>(p.x + kMoveSign[m]); break;
    case 1: p.y = static_cast<std::int8_t>(p.y + kMoveSign[m]); break;
    default: p.z = static_cast<std::int8_t>(p.z + kMoveSign[m]);
  }
  return p;
}

inline bool in_cube(Vec3 p) {
  return p.x >= 0 && p.x < kCubeSide && p.y >= 0 && p.y < kCubeSide &&
         p.z >= 0 && p.z < kCubeSide;
}

inline int cell_index(Vec3 p) { return p.x + 3 * p.y + 9 * p.z; }

// One element of the cube point group, represented by its action on move
// codes (a signed axis permutation).
struct SymmetryOp {
  std::array<std::uint8_t, 6> move_map;
};

// The 48 signed axis permutations (24 proper rotations when proper_only).
std::vector<SymmetryOp> octahedral_group(bool proper_only = false);

}  // namespace lprbm
