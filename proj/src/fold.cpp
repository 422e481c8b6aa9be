#include "lprbm/fold.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace lprbm {

namespace {

void fill_contacts(Fold& fold) {
  int pos_of_cell[kChainLength];
  for (int i = 0; i < kChainLength; ++i) pos_of_cell[cell_index(fold.coords[i])] = i;
  int n = 0;
  for (int i = 0; i < kChainLength; ++i) {
    const Vec3 p = fold.coords[i];
    for (int m = 0; m < 6; ++m) {
      const Vec3 q = apply_move(p, m);
      if (!in_cube(q)) continue;
      const int j = pos_of_cell[cell_index(q)];
      if (j > i + 1) {
        if (n == kNumContacts) throw std::logic_error("fold: more than 28 contacts");
        fold.contacts[n++] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
      }
    }
  }
  if (n != kNumContacts) throw std::logic_error("fold: fewer than 28 contacts");
  std::sort(fold.contacts.begin(), fold.contacts.end());
}

// Builds coords from moves given a start cell; returns false if the walk
// leaves the cube or revisits a cell.
bool trace(const std::array<std::uint8_t, kNumMoves>& moves, Vec3 start,
           std::array<Vec3, kChainLength>& coords) {
  bool seen[kChainLength] = {};
  Vec3 p = start;
  coords[0] = p;
  seen[cell_index(p)] = true;
  for (int k = 0; k < kNumMoves; ++k) {
    p = apply_move(p, moves[k]);
    if (!in_cube(p)) return false;
    const int c = cell_index(p);
    if (seen[c]) return false;
    seen[c] = true;
    coords[k + 1] = p;
  }
  return true;
}

struct ContactKey {
  std::array<std::uint16_t, kNumContacts> packed{};
  bool operator==(const ContactKey&) const = default;
};

struct ContactKeyHash {
  std::size_t operator()(const ContactKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint16_t v : k.packed) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

ContactKey contact_key(const Fold& f) {
  ContactKey k;
  for (int n = 0; n < kNumContacts; ++n)
    k.packed[n] = static_cast<std::uint16_t>(f.contacts[n].first * kChainLength +
                                             f.contacts[n].second);
  return k;
}

class Enumerator {
 public:
  explicit Enumerator(SymmetryConvention convention)
      : convention_(convention), group_(octahedral_group(false)) {}

  std::vector<Fold> run() {
    std::vector<Fold> out;
    for (int sx = 0; sx < kCubeSide; ++sx)
      for (int sy = 0; sy < kCubeSide; ++sy)
        for (int sz = 0; sz < kCubeSide; ++sz) {
          Vec3 start{static_cast<std::int8_t>(sx), static_cast<std::int8_t>(sy),
                     static_cast<std::int8_t>(sz)};
          std::fill(std::begin(visited_), std::end(visited_), false);
          visited_[cell_index(start)] = true;
          path_[0] = start;
          alive_[0] = (~std::uint64_t{0}) >> (64 - 48);
          dfs(start, 0, out);
        }
    std::sort(out.begin(), out.end(), [](const Fold& a, const Fold& b) {
      return a.moves < b.moves;
    });
    return out;
  }

 private:
  // A path is kept only if its move string is the lexicographic minimum of
  // its orbit. The 48 point-group elements act letter-by-letter, so any
  // element that would produce a smaller string already does so on a prefix:
  // those branches are pruned during the search. Chain reversal (when part of
  // the convention) is checked once per completed path.
  void dfs(Vec3 p, int depth, std::vector<Fold>& out) {
    if (depth == kNumMoves) {
      if (convention_ == SymmetryConvention::kOctahedralReversal &&
          !minimal_under_reversal())
        return;
      Fold f;
      f.moves = moves_;
      std::copy(std::begin(path_), std::end(path_), f.coords.begin());
      fill_contacts(f);
      out.push_back(f);
      return;
    }
    for (int m = 0; m < 6; ++m) {
      const Vec3 q = apply_move(p, m);
      if (!in_cube(q)) continue;
      const int c = cell_index(q);
      if (visited_[c]) continue;
      moves_[depth] = static_cast<std::uint8_t>(m);
      if (!prefix_minimal(depth)) continue;
      visited_[c] = true;
      path_[depth + 1] = q;
      dfs(q, depth + 1, out);
      visited_[c] = false;
    }
  }

  bool prefix_minimal(int depth) {
    const std::uint64_t alive = alive_[depth];
    std::uint64_t next = 0;
    const int m = moves_[depth];
    for (int gi = 1; gi < 48; ++gi) {
      if (!(alive >> gi & 1)) continue;
      const int tm = group_[gi].move_map[m];
      if (tm < m) return false;
      if (tm == m) next |= std::uint64_t{1} << gi;
    }
    alive_[depth + 1] = next;
    return true;
  }

  bool minimal_under_reversal() const {
    for (const SymmetryOp& g : group_) {
      for (int k = 0; k < kNumMoves; ++k) {
        const int tm = g.move_map[kMoveNegation[moves_[kNumMoves - 1 - k]]];
        if (tm < moves_[k]) return false;
        if (tm > moves_[k]) break;
      }
    }
    return true;
  }

  SymmetryConvention convention_;
  std::vector<SymmetryOp> group_;
  std::array<std::uint8_t, kNumMoves> moves_{};
  Vec3 path_[kChainLength];
  bool visited_[kChainLength] = {};
  std::uint64_t alive_[kChainLength] = {};
};

}  // namespace

std::string Fold::move_string() const {
  std::string s(kNumMoves, '?');
  for (int k = 0; k < kNumMoves; ++k) s[k] = kMoveLetters[moves[k]];
  return s;
}

bool Fold::contact(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& [a, b] : contacts)
    if (a == i && b == j) return true;
  return false;
}

std::array<std::array<std::uint8_t, kChainLength>, kChainLength> Fold::contact_map()
    const {
  std::array<std::array<std::uint8_t, kChainLength>, kChainLength> map{};
  for (const auto& [i, j] : contacts) map[i][j] = map[j][i] = 1;
  return map;
}

std::optional<Fold> Fold::from_moves(std::string_view s) {
  if (s.size() != kNumMoves) return std::nullopt;
  Fold f;
  for (int k = 0; k < kNumMoves; ++k) {
    const int m = move_from_letter(s[k]);
    if (m < 0) return std::nullopt;
    f.moves[k] = static_cast<std::uint8_t>(m);
  }
  // the walk covers all 27 cells, so exactly one translate fits in the cube
  for (int sx = 0; sx < kCubeSide; ++sx)
    for (int sy = 0; sy < kCubeSide; ++sy)
      for (int sz = 0; sz < kCubeSide; ++sz) {
        Vec3 start{static_cast<std::int8_t>(sx), static_cast<std::int8_t>(sy),
                   static_cast<std::int8_t>(sz)};
        if (trace(f.moves, start, f.coords)) {
          fill_contacts(f);
          return f;
        }
      }
  return std::nullopt;
}

std::string to_string(SymmetryConvention c) {
  return c == SymmetryConvention::kOctahedral ? "octahedral" : "octahedral+reversal";
}

std::optional<SymmetryConvention> convention_from_string(std::string_view s) {
  if (s == "octahedral") return SymmetryConvention::kOctahedral;
  if (s == "octahedral+reversal") return SymmetryConvention::kOctahedralReversal;
  return std::nullopt;
}

void FoldSet::rebuild_dedup_index() {
  class_of_fold.assign(folds.size(), 0);
  class_multiplicity.clear();
  class_representative.clear();
  std::unordered_map<ContactKey, std::uint32_t, ContactKeyHash> index;
  index.reserve(folds.size() * 2);
  for (std::uint32_t fi = 0; fi < folds.size(); ++fi) {
    const ContactKey key = contact_key(folds[fi]);
    auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(
                                                     class_multiplicity.size()));
    if (inserted) {
      class_multiplicity.push_back(0);
      class_representative.push_back(fi);
    }
    class_of_fold[fi] = it->second;
    ++class_multiplicity[it->second];
  }
}

FoldSet enumerate_folds(SymmetryConvention convention) {
  FoldSet set;
  set.convention = convention;
  set.folds = Enumerator(convention).run();
  set.rebuild_dedup_index();
  return set;
}

std::uint64_t fold_orbit_size(const Fold& fold, SymmetryConvention convention) {
  const auto group = octahedral_group(false);
  std::uint64_t stabilizer = 0;
  for (const SymmetryOp& g : group) {
    bool fixes = true;
    for (int k = 0; k < kNumMoves && fixes; ++k)
      fixes = g.move_map[fold.moves[k]] == fold.moves[k];
    if (fixes) ++stabilizer;
    if (convention == SymmetryConvention::kOctahedralReversal) {
      fixes = true;
      for (int k = 0; k < kNumMoves && fixes; ++k)
        fixes = g.move_map[kMoveNegation[fold.moves[kNumMoves - 1 - k]]] ==
                fold.moves[k];
      if (fixes) ++stabilizer;
    }
  }
  const std::uint64_t group_size =
      convention == SymmetryConvention::kOctahedralReversal ? 96 : 48;
  return group_size / stabilizer;
}

void save_folds(const std::filesystem::path& path, const FoldSet& set,
                std::string_view config_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write fold file: " + path.string());
  out << "# lattice folds 3x3x3\n";
  out << "# convention: " << to_string(set.convention) << "\n";
  out << "# count: " << set.folds.size() << "\n";
  if (!config_hash.empty()) out << "# config: " << config_hash << "\n";
  for (const Fold& f : set.folds) out << f.move_string() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FoldSet load_folds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read fold file: " + path.string());
  FoldSet set;
  std::size_t declared_count = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto parse_field = [&](std::string_view key) -> std::string {
        const auto pos = line.find(key);
        if (pos == std::string::npos) return {};
        auto value = line.substr(pos + key.size());
        while (!value.empty() && value.front() == ' ') value.erase(0, 1);
        return value;
      };
      if (auto v = parse_field("# convention:"); !v.empty()) {
        const auto c = convention_from_string(v);
        if (!c) throw std::runtime_error("unknown fold convention: " + v);
        set.convention = *c;
      } else if (auto n = parse_field("# count:"); !n.empty()) {
        declared_count = std::stoull(n);
      }
      continue;
    }
    auto f = Fold::from_moves(line);
    if (!f) throw std::runtime_error("invalid fold line: " + line);
    set.folds.push_back(*f);
  }
  if (declared_count != 0 && declared_count != set.folds.size())
    throw std::runtime_error("fold file count mismatch");
  set.rebuild_dedup_index();
  return set;
}

}  // namespace lprbm
