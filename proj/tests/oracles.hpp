#pragma once

// Finite sets and functions as plain value vectors, independent of fwfs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

struct Map {
  int m = 0, k = 0;
  std::vector<int> v;
  bool operator==(const Map&) const = default;
};

inline std::vector<Map> maps(int m, int k)
{
  std::vector<Map> out;
  if (m > 0 && k == 0)
    return out;
  std::vector<int> v(static_cast<std::size_t>(m), 0);
  while (true) {
    out.push_back({m, k, v});
    int i = m - 1;
    while (i >= 0 && ++v[static_cast<std::size_t>(i)] == k)
      v[static_cast<std::size_t>(i--)] = 0;
    if (i < 0)
      break;
  }
  return out;
}

inline std::vector<Map> all_maps(int n)
{
  std::vector<Map> out;
  for (int m = 0; m <= n; ++m)
    for (int k = 0; k <= n; ++k)
      for (auto& f : maps(m, k))
        out.push_back(f);
  return out;
}

// "m>k:vals", or "0>k" for the empty map
inline std::string name(const Map& f)
{
  std::string s = std::to_string(f.m) + ">" + std::to_string(f.k);
  if (f.m == 0)
    return s;
  s += ":";
  for (int x : f.v)
    s += std::to_string(x);
  return s;
}

// g after f
inline Map compose(const Map& g, const Map& f)
{
  Map h{f.m, g.k, {}};
  for (int x : f.v)
    h.v.push_back(g.v[static_cast<std::size_t>(x)]);
  return h;
}

inline Map identity(int n)
{
  Map f{n, n, {}};
  for (int i = 0; i < n; ++i)
    f.v.push_back(i);
  return f;
}

inline bool surjective(const Map& f)
{
  for (int y = 0; y < f.k; ++y) {
    bool hit = false;
    for (int x : f.v)
      hit = hit || x == y;
    if (!hit)
      return false;
  }
  return true;
}

inline bool injective(const Map& f)
{
  for (std::size_t i = 0; i < f.v.size(); ++i)
    for (std::size_t j = i + 1; j < f.v.size(); ++j)
      if (f.v[i] == f.v[j])
        return false;
  return true;
}

struct Sq {
  Map f, g, h, k; // k∘f = g∘h
};

// Commuting squares from f to g.
inline std::vector<Sq> squares(const Map& f, const Map& g)
{
  std::vector<Sq> out;
  for (auto& h : maps(f.m, g.m))
    for (auto& k : maps(f.k, g.k))
      if (compose(g, h) == compose(k, f))
        out.push_back({f, g, h, k});
  return out;
}

inline std::vector<Map> fillers(const Sq& s)
{
  std::vector<Map> out;
  for (auto& d : maps(s.f.k, s.g.m))
    if (compose(d, s.f) == s.h && compose(s.g, d) == s.k)
      out.push_back(d);
  return out;
}

template <class L, class R>
inline std::uint64_t count_squares(int n, L left, R right)
{
  std::uint64_t c = 0;
  auto all = all_maps(n);
  for (auto& f : all)
    if (left(f))
      for (auto& g : all)
        if (right(g))
          c += squares(f, g).size();
  return c;
}

// f = m∘e through the image, image elements labelled by first appearance.
struct Image {
  Map e, m;
};

inline Image image(const Map& f)
{
  std::vector<int> seen;
  Image out{{f.m, 0, {}}, {0, f.k, {}}};
  for (int x : f.v) {
    std::size_t i = 0;
    while (i < seen.size() && seen[i] != x)
      ++i;
    if (i == seen.size())
      seen.push_back(x);
    out.e.v.push_back(static_cast<int>(i));
  }
  out.e.k = out.m.m = static_cast<int>(seen.size());
  out.m.v = seen;
  return out;
}

} // namespace oracle

// Values computed once with the oracle above and cross-checked by hand for n ≤ 2.
namespace frozen {

inline constexpr std::size_t finset_morphisms[] = {1, 3, 11, 60, 499};
inline constexpr std::size_t finset_epis[] = {1, 2, 5, 18};
inline constexpr std::size_t finset_monos[] = {1, 3, 8, 24};

inline constexpr std::uint64_t squares_finset2 = 249;
inline constexpr std::uint64_t squares_finset3 = 74112;
inline constexpr std::uint64_t epi_mono_squares_finset2 = 44;
inline constexpr std::uint64_t epi_mono_squares_finset3 = 2272;
inline constexpr std::uint64_t epi_epi_squares_finset2 = 47;
inline constexpr std::uint64_t mono_mono_squares_finset2 = 97;
inline constexpr std::uint64_t epi_all_squares_finset2 = 89;
inline constexpr std::uint64_t epi_epi_squares_finset3 = 3886;
inline constexpr std::uint64_t mono_mono_squares_finset3 = 5114;
inline constexpr std::uint64_t epi_all_squares_finset3 = 12190;

inline constexpr std::size_t walking_arrow_endofunctors = 3;
inline constexpr std::size_t rlp_mono_candidates_over_2_to_1 = 128;

inline constexpr std::size_t left_trivial_coalgebras_finset3 = 10;
inline constexpr std::size_t left_trivial_algebras_finset3 = 60;

inline constexpr std::size_t comma_id2_objects = 3;
inline constexpr std::size_t comma_id2_morphisms = 6;
inline constexpr std::size_t stock_roster_functors = 31;

} // namespace frozen
