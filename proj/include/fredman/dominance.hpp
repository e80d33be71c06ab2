#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fredman {

enum class Color : std::uint8_t { red, blue };

template <class Coord>
struct LabeledPoint {
  std::vector<Coord> coords;
  Color color = Color::red;
  std::size_t id = 0;
};

struct DominanceCostModel {
  double epsilon;
  double c_epsilon;
};

// 2^eps / (2^eps - 1). Throws std::domain_error unless 0 < eps < 1.
double c_epsilon(double epsilon);
DominanceCostModel dominance_cost_model(double epsilon);

namespace detail {

template <class Coord, class Less, class Sink>
class DominanceReporter {
 public:
  DominanceReporter(std::span<const LabeledPoint<Coord>> pts, Sink& sink, Less& less)
      : pts_(pts), sink_(sink), less_(less) {}

  std::size_t run(std::vector<std::uint32_t> idx, std::size_t d) {
    recurse(idx, d);
    return reported_;
  }

 private:
  static constexpr std::size_t kCutoff = 16;

  const std::vector<Coord>& xs(std::uint32_t k) const { return pts_[k].coords; }
  bool is_red(std::uint32_t k) const { return pts_[k].color == Color::red; }

  void report(std::uint32_t red, std::uint32_t blue) {
    sink_(pts_[red].id, pts_[blue].id);
    ++reported_;
  }

  bool dominates(std::uint32_t red, std::uint32_t blue, std::size_t d) {
    const auto& p = xs(red);
    const auto& q = xs(blue);
    for (std::size_t t = 0; t < d; ++t) {
      if (less_(p[t], q[t])) return false;
    }
    return true;
  }

  void recurse(std::vector<std::uint32_t>& idx, std::size_t d) {
    std::size_t reds = 0;
    for (auto k : idx) reds += is_red(k) ? 1 : 0;
    if (reds == 0 || reds == idx.size()) return;

    if (d <= 1 || idx.size() <= kCutoff) {
      for (auto r : idx) {
        if (!is_red(r)) continue;
        for (auto b : idx) {
          if (!is_red(b) && dominates(r, b, d)) report(r, b);
        }
      }
      return;
    }

    const std::size_t last = d - 1;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      const Coord& ca = xs(a)[last];
      const Coord& cb = xs(b)[last];
      if (less_(ca, cb)) return true;
      if (less_(cb, ca)) return false;
      if (is_red(a) != is_red(b)) return !is_red(a);
      return a < b;
    });
    const std::size_t n = idx.size();
    const std::size_t half = (n + 1) / 2;
    std::vector<std::uint32_t> left(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::uint32_t> right(idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
    if (left.size() > half || right.size() > half) throw std::logic_error("median split violated");

    std::vector<std::uint32_t> cross;
    for (auto k : left)
      if (!is_red(k)) cross.push_back(k);
    const std::size_t blues = cross.size();
    for (auto k : right)
      if (is_red(k)) cross.push_back(k);

    recurse(left, d);
    recurse(right, d);
    if (blues != 0 && cross.size() != blues) recurse(cross, d - 1);
  }

  std::span<const LabeledPoint<Coord>> pts_;
  Sink& sink_;
  Less& less_;
  std::size_t reported_ = 0;
};

}  // namespace detail

// Calls sink(red id, blue id) once for every red p and blue q with p_t >= q_t
// in every coordinate. Returns the number of pairs reported.
template <class Coord, class Sink, class Less = std::less<Coord>>
std::size_t report_dominating_pairs(std::span<const LabeledPoint<Coord>> points, Sink&& sink,
                                    Less less = Less{}) {
  if (points.empty()) return 0;
  const std::size_t d = points.front().coords.size();
  bool has_red = false, has_blue = false;
  for (const auto& p : points) {
    if (p.coords.size() != d) throw std::invalid_argument("dimension mismatch");
    (p.color == Color::red ? has_red : has_blue) = true;
  }
  if (!has_red || !has_blue) return 0;
  std::vector<std::uint32_t> idx(points.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<std::uint32_t>(k);
  detail::DominanceReporter<Coord, Less, std::remove_reference_t<Sink>> rep(points, sink, less);
  return rep.run(std::move(idx), d);
}

template <class Coord, class Sink, class Less = std::less<Coord>>
std::size_t report_dominating_pairs(const std::vector<LabeledPoint<Coord>>& points, Sink&& sink,
                                    Less less = Less{}) {
  return report_dominating_pairs(std::span<const LabeledPoint<Coord>>(points),
                                 std::forward<Sink>(sink), less);
}

}  // namespace fredman
