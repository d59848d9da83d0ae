#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dimlab/core.hpp"

namespace dimlab {

inline constexpr uint64_t kGameStateCap = uint64_t{1} << 20;

// Square-loss prediction game on finite action grids. The learner picks
// yhat from yhat_grid, the adversary picks y from y_grid; the payoff is
// cumulative (yhat - y)^2 minus the best comparator loss in hindsight.
struct GameConfig {
  FunctionClass cls;
  int horizon = 0;
  std::vector<Rational> yhat_grid;
  std::vector<Rational> y_grid;
  std::optional<SampleDesign> design;  // transductive: contexts fixed up front
  std::vector<int> context_grid;       // online: adversary picks contexts per round
  int horizon_cap = 4;                 // full-history exactness cap

  static std::vector<Rational> default_grid() {
    std::vector<Rational> g;
    for (int k = -4; k <= 4; ++k) g.push_back(Rational(k, 2));
    return g;
  }
};

namespace detail {

inline void validate_grids(const GameConfig& cfg) {
  if (cfg.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (cfg.horizon > cfg.horizon_cap)
    throw std::invalid_argument("horizon exceeds the full-history exactness cap");
  for (const auto* grid : {&cfg.yhat_grid, &cfg.y_grid}) {
    if (grid->empty()) throw std::invalid_argument("action grids must be nonempty");
    bool has_zero = false;
    for (const Rational& v : *grid) {
      if (v < -2 || v > 2) throw std::invalid_argument("actions must lie in [-2, 2]");
      if (v == 0) has_zero = true;
    }
    if (!has_zero) throw std::invalid_argument("action grids must contain 0");
  }
}

// history cap n * |branching|^n <= 2^20, where branching counts the
// adversary's per-round history choices
inline void check_state_cap(uint64_t branching, int horizon) {
  uint64_t states = 1;
  for (int t = 0; t < horizon; ++t) {
    if (states > kGameStateCap / std::max<uint64_t>(branching, 1))
      throw std::invalid_argument("game state space exceeds the exactness cap");
    states *= branching;
  }
  if (horizon > 0 && states > kGameStateCap / static_cast<uint64_t>(horizon))
    throw std::invalid_argument("game state space exceeds the exactness cap");
}

// Backward induction over full histories, on integers scaled by a common
// denominator squared. Comparator losses accumulate per function as (x, y)
// pairs are appended, so the terminal payoff is an O(|F|) minimum.
class GameSolver {
 public:
  explicit GameSolver(const GameConfig& cfg) : cfg_(cfg) {
    BigInt d = cfg.cls.grid().q;
    for (const auto* grid : {&cfg.yhat_grid, &cfg.y_grid})
      for (const Rational& v : *grid) d = boost::multiprecision::lcm(d, den(v));
    scale_ = d;
    // per-round scaled losses are at most (4D)^2
    if (BigInt(cfg.horizon + 1) * 16 * d * d > (BigInt(1) << 60))
      throw std::overflow_error("game grids too fine for 64-bit scoring");
    for (const Rational& v : cfg.yhat_grid) yhat_.push_back(to_int64(num(v * scale_)));
    for (const Rational& v : cfg.y_grid) y_.push_back(to_int64(num(v * scale_)));
    fval_.assign(static_cast<size_t>(cfg.cls.n_points()),
                 std::vector<int64_t>(static_cast<size_t>(cfg.cls.n_functions())));
    for (int x = 0; x < cfg.cls.n_points(); ++x)
      for (int f = 0; f < cfg.cls.n_functions(); ++f)
        fval_[static_cast<size_t>(x)][static_cast<size_t>(f)] =
            to_int64(num(cfg.cls.value(f, x) * scale_));
    comparator_.assign(static_cast<size_t>(cfg.cls.n_functions()), 0);
  }

  Rational value() {
    const int64_t v = continue_from(1);
    return Rational(BigInt(v), scale_ * scale_);
  }

 private:
  static int64_t sq(int64_t a) { return a * a; }

  int64_t stage(int t, int x) {
    int64_t best_yhat = 0;
    bool first_yhat = true;
    for (int64_t yhat : yhat_) {
      int64_t worst = 0;
      bool first_y = true;
      for (int64_t y : y_) {
        for (int f = 0; f < cfg_.cls.n_functions(); ++f)
          comparator_[static_cast<size_t>(f)] +=
              sq(fval_[static_cast<size_t>(x)][static_cast<size_t>(f)] - y);
        const int64_t v = sq(yhat - y) + continue_from(t + 1);
        for (int f = 0; f < cfg_.cls.n_functions(); ++f)
          comparator_[static_cast<size_t>(f)] -=
              sq(fval_[static_cast<size_t>(x)][static_cast<size_t>(f)] - y);
        if (first_y || v > worst) worst = v;
        first_y = false;
      }
      if (first_yhat || worst < best_yhat) best_yhat = worst;
      first_yhat = false;
    }
    return best_yhat;
  }

  int64_t continue_from(int t) {
    if (t > cfg_.horizon) {
      int64_t best = comparator_[0];
      for (int64_t v : comparator_) best = std::min(best, v);
      return -best;
    }
    if (cfg_.design) return stage(t, cfg_.design->indices[static_cast<size_t>(t - 1)]);
    int64_t best_x = 0;
    bool first = true;
    for (int x : cfg_.context_grid) {
      const int64_t v = stage(t, x);
      if (first || v > best_x) best_x = v;
      first = false;
    }
    return best_x;
  }

  const GameConfig& cfg_;
  BigInt scale_;
  std::vector<int64_t> yhat_, y_;
  std::vector<std::vector<int64_t>> fval_;
  std::vector<int64_t> comparator_;
};

}  // namespace detail

// Exact value of the transductive game: contexts fixed by the caller's
// design, alternation inf_yhat sup_y per round, square-loss regret payoff.
inline Rational minimax_transductive(const GameConfig& cfg) {
  detail::validate_grids(cfg);
  if (!cfg.design) throw std::invalid_argument("transductive game needs a design");
  if (cfg.design->size() != static_cast<size_t>(cfg.horizon))
    throw std::invalid_argument("design length must equal the horizon");
  for (int x : cfg.design->indices)
    if (x < 0 || x >= cfg.cls.n_points()) throw std::out_of_range("design index out of range");
  detail::check_state_cap(cfg.y_grid.size(), cfg.horizon);
  detail::GameSolver solver(cfg);
  return solver.value();
}

// Exact value of the online game: the adversary additionally picks the
// context each round (sup_x inf_yhat sup_y).
inline Rational minimax_online_seq(const GameConfig& cfg) {
  detail::validate_grids(cfg);
  if (cfg.design) throw std::invalid_argument("online game takes a context grid, not a design");
  if (cfg.context_grid.empty()) throw std::invalid_argument("context grid must be nonempty");
  for (int x : cfg.context_grid)
    if (x < 0 || x >= cfg.cls.n_points()) throw std::out_of_range("context index out of range");
  detail::check_state_cap(cfg.context_grid.size() * cfg.y_grid.size(),
                          cfg.horizon);
  detail::GameSolver solver(cfg);
  return solver.value();
}

}  // namespace dimlab
