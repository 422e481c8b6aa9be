#include "lprbm/geometry.hpp"

namespace lprbm {

int move_from_letter(char c) {
  for (int m = 0; m < 6; ++m)
    if (kMoveLetters[m] == c) return m;
  return -1;
}

std::vector<SymmetryOp> octahedral_group(bool proper_only) {
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static constexpr int perm_sign[6] = {1, -1, -1, 1, 1, -1};
  std::vector<SymmetryOp> group;
  group.reserve(proper_only ? 24 : 48);
  for (int pi = 0; pi < 6; ++pi) {
    for (int sbits = 0; sbits < 8; ++sbits) {
      const int sign[3] = {(sbits & 1) ? -1 : 1, (sbits & 2) ? -1 : 1,
                           (sbits & 4) ? -1 : 1};
      if (proper_only && perm_sign[pi] * sign[0] * sign[1] * sign[2] != 1)
        continue;
      SymmetryOp op;
      for (int m = 0; m < 6; ++m) {
        const int axis = kMoveAxis[m];
        const int new_axis = perms[pi][axis];
        const int new_sign = kMoveSign[m] * sign[new_axis];
        for (int mm = 0; mm < 6; ++mm)
          if (kMoveAxis[mm] == new_axis && kMoveSign[mm] == new_sign)
            op.move_map[m] = static_cast<std::uint8_t>(mm);
      }
      group.push_back(op);
    }
  }
  return group;
}

}  // namespace lprbm
