#include "natree/linprog.hpp"

#include <stdexcept>

namespace natree {

void LinearProgram::validate() const {
  if (cost.empty()) throw std::invalid_argument("lp: needs at least one variable");
  if (bounds.size() != cost.size()) throw std::invalid_argument("lp: bounds/cost size mismatch");
  if (rows.size() != senses.size() || rows.size() != rhs.size())
    throw std::invalid_argument("lp: rows/senses/rhs size mismatch");
  for (const auto& r : rows)
    if (r.size() != cost.size()) throw std::invalid_argument("lp: row length mismatch");
}

namespace {

// Standard-form tableau. Columns: structural (free variables split into
// positive/negative parts), then one slack or surplus per inequality row,
// then one artificial per Ge/Eq row. Rows are sign-normalized so rhs >= 0.
// Artificial columns never re-enter the basis once left; a redundant row
// keeps its artificial basic at value zero and stays inert.
struct Simplex {
  const LinearProgram& lp;
  int m;                           // rows
  int ncols = 0;                   // total columns
  std::vector<RatVec> a;           // m x ncols
  RatVec b;                        // m, kept >= 0
  std::vector<int> basis;          // per row: basic column
  std::vector<char> is_art;        // per column
  std::vector<int> init_col;       // per row: its initial basic column
  std::vector<int> row_sign;       // +1 / -1 applied during normalization
  std::vector<int> pos_col;        // per variable: column of positive part
  std::vector<int> neg_col;        // per variable: column of negative part (-1 if none)
  RatVec z;                        // active reduced-cost row
  Rat zrhs;                        // stays equal to -(current objective)
  Rat tmp;                         // scratch

  explicit Simplex(const LinearProgram& prog) : lp(prog), m(prog.num_rows()) {
    const int n = lp.num_vars();
    pos_col.assign(n, -1);
    neg_col.assign(n, -1);
    for (int j = 0; j < n; ++j) {
      pos_col[j] = ncols++;
      if (lp.bounds[j] == VarBound::Free) neg_col[j] = ncols++;
    }
    row_sign.assign(m, 1);
    std::vector<Sense> sense(m);
    for (int i = 0; i < m; ++i) {
      sense[i] = lp.senses[i];
      if (sgn(lp.rhs[i]) < 0) {
        row_sign[i] = -1;
        if (sense[i] == Sense::Le)
          sense[i] = Sense::Ge;
        else if (sense[i] == Sense::Ge)
          sense[i] = Sense::Le;
      }
    }
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    for (int i = 0; i < m; ++i)
      if (sense[i] != Sense::Eq) slack_col[i] = ncols++;
    for (int i = 0; i < m; ++i)
      if (sense[i] != Sense::Le) art_col[i] = ncols++;

    a.assign(m, zeros(ncols));
    b = zeros(m);
    basis.assign(m, -1);
    is_art.assign(ncols, 0);
    init_col.assign(m, -1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const Rat& v = lp.rows[i][j];
        if (sgn(v) == 0) continue;
        Rat w = row_sign[i] < 0 ? Rat(-v) : v;
        a[i][pos_col[j]] = w;
        if (neg_col[j] >= 0) a[i][neg_col[j]] = -w;
      }
      b[i] = row_sign[i] < 0 ? Rat(-lp.rhs[i]) : lp.rhs[i];
      if (slack_col[i] >= 0) a[i][slack_col[i]] = sense[i] == Sense::Le ? 1 : -1;
      if (art_col[i] >= 0) {
        a[i][art_col[i]] = 1;
        is_art[art_col[i]] = 1;
        basis[i] = art_col[i];
      } else {
        basis[i] = slack_col[i];
      }
      init_col[i] = basis[i];
    }
  }

  void pivot(int r, int s) {
    Rat inv = 1 / a[r][s];
    if (inv != 1) {
      for (int j = 0; j < ncols; ++j)
        if (sgn(a[r][j]) != 0) a[r][j] *= inv;
      b[r] *= inv;
    }
    a[r][s] = 1;
    for (int i = 0; i < m; ++i) {
      if (i == r || sgn(a[i][s]) == 0) continue;
      Rat f = a[i][s];
      for (int j = 0; j < ncols; ++j) {
        if (sgn(a[r][j]) == 0) continue;
        tmp = f * a[r][j];
        a[i][j] -= tmp;
      }
      if (sgn(b[r]) != 0) {
        tmp = f * b[r];
        b[i] -= tmp;
      }
      a[i][s] = 0;
    }
    if (sgn(z[s]) != 0) {
      Rat f = z[s];
      for (int j = 0; j < ncols; ++j) {
        if (sgn(a[r][j]) == 0) continue;
        tmp = f * a[r][j];
        z[j] -= tmp;
      }
      if (sgn(b[r]) != 0) {
        tmp = f * b[r];
        zrhs -= tmp;
      }
      z[s] = 0;
    }
    basis[r] = s;
  }

  // Bland iteration for the active reduced-cost row. Returns true when
  // optimal, false when an improving column has no blocking row (the caller
  // interprets that as unboundedness); `entering` reports that column.
  bool iterate(int& entering) {
    for (;;) {
      int s = -1;
      for (int j = 0; j < ncols; ++j) {
        if (is_art[j]) continue;
        if (sgn(z[j]) < 0) {
          s = j;
          break;
        }
      }
      if (s < 0) return true;
      int r = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (sgn(a[i][s]) <= 0) continue;
        Rat ratio = b[i] / a[i][s];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) {
        entering = s;
        return false;
      }
      pivot(r, s);
    }
  }

  // Minimize the sum of artificials. Returns the phase-1 value.
  Rat phase1() {
    z = zeros(ncols);
    zrhs = 0;
    for (int j = 0; j < ncols; ++j)
      if (is_art[j]) z[j] = 1;
    for (int i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      for (int j = 0; j < ncols; ++j)
        if (sgn(a[i][j]) != 0) z[j] -= a[i][j];
      zrhs -= b[i];
    }
    int entering = -1;
    if (!iterate(entering)) throw std::logic_error("lp: phase 1 cannot be unbounded");
    return -zrhs;
  }

  RatVec extract_farkas() const {
    RatVec y(m);
    for (int i = 0; i < m; ++i) {
      const int c = init_col[i];
      Rat yi = (is_art[c] ? Rat(1) : Rat(0)) - z[c];
      y[i] = row_sign[i] < 0 ? Rat(-yi) : yi;
    }
    return y;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      int s = -1;
      for (int j = 0; j < ncols; ++j) {
        if (is_art[j]) continue;
        if (sgn(a[i][j]) != 0) {
          s = j;
          break;
        }
      }
      if (s >= 0) pivot(i, s);
      // otherwise the row is redundant; its artificial stays basic at zero
    }
  }

  // Reduced costs for the phase-2 objective (minimization form).
  void install_cost(const RatVec& cmin) {
    z = zeros(ncols);
    zrhs = 0;
    const int n = lp.num_vars();
    for (int j = 0; j < n; ++j) {
      if (sgn(cmin[j]) == 0) continue;
      z[pos_col[j]] = cmin[j];
      if (neg_col[j] >= 0) z[neg_col[j]] = -cmin[j];
    }
    for (int i = 0; i < m; ++i) {
      const Rat cb = z[basis[i]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j < ncols; ++j) {
        if (sgn(a[i][j]) == 0) continue;
        tmp = cb * a[i][j];
        z[j] -= tmp;
      }
      tmp = cb * b[i];
      zrhs -= tmp;
    }
  }

  RatVec current_point() const {
    RatVec x(lp.num_vars(), Rat(0));
    RatVec colval(ncols, Rat(0));
    for (int i = 0; i < m; ++i) colval[basis[i]] = b[i];
    for (int j = 0; j < lp.num_vars(); ++j) {
      x[j] = colval[pos_col[j]];
      if (neg_col[j] >= 0) x[j] -= colval[neg_col[j]];
    }
    return x;
  }

  RatVec ray_from(int s) const {
    RatVec dir(ncols, Rat(0));
    dir[s] = 1;
    for (int i = 0; i < m; ++i)
      if (sgn(a[i][s]) != 0) dir[basis[i]] = -a[i][s];
    RatVec r(lp.num_vars(), Rat(0));
    for (int j = 0; j < lp.num_vars(); ++j) {
      r[j] = dir[pos_col[j]];
      if (neg_col[j] >= 0) r[j] -= dir[neg_col[j]];
    }
    return r;
  }
};

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
  lp.validate();
  Simplex sx(lp);

  LpOutcome out;
  if (sgn(sx.phase1()) > 0) {
    out.status = LpStatus::Infeasible;
    out.farkas = sx.extract_farkas();
    return out;
  }
  sx.drive_out_artificials();

  RatVec cmin = lp.cost;
  if (lp.objective == Objective::Maximize)
    for (auto& c : cmin) c = -c;
  sx.install_cost(cmin);

  int entering = -1;
  if (!sx.iterate(entering)) {
    out.status = LpStatus::Unbounded;
    out.point = sx.current_point();
    out.ray = sx.ray_from(entering);
    return out;
  }
  out.status = LpStatus::Optimal;
  out.point = sx.current_point();
  out.value = dot(lp.cost, out.point);
  return out;
}

Feasibility lp_feasible(const LinearProgram& lp) {
  LinearProgram probe = lp;
  probe.cost = zeros(lp.cost.size());
  probe.objective = Objective::Minimize;
  LpOutcome o = lp_solve(probe);
  Feasibility f;
  if (o.status == LpStatus::Optimal) {
    f.feasible = true;
    f.point = o.point;
  } else {
    f.feasible = false;
    f.farkas = o.farkas;
  }
  return f;
}

bool lp_satisfies(const LinearProgram& lp, const RatVec& x) {
  if (static_cast<int>(x.size()) != lp.num_vars()) return false;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.bounds[j] == VarBound::NonNeg && sgn(x[j]) < 0) return false;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Rat lhs = dot(lp.rows[i], x);
    const int c = cmp(lhs, lp.rhs[i]);
    switch (lp.senses[i]) {
      case Sense::Le:
        if (c > 0) return false;
        break;
      case Sense::Eq:
        if (c != 0) return false;
        break;
      case Sense::Ge:
        if (c < 0) return false;
        break;
    }
  }
  return true;
}

bool lp_valid_farkas(const LinearProgram& lp, const RatVec& y) {
  if (static_cast<int>(y.size()) != lp.num_rows()) return false;
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.senses[i] == Sense::Le && sgn(y[i]) > 0) return false;
    if (lp.senses[i] == Sense::Ge && sgn(y[i]) < 0) return false;
  }
  RatVec v = zeros(lp.num_vars());
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (sgn(y[i]) == 0) continue;
    for (int j = 0; j < lp.num_vars(); ++j) v[j] += y[i] * lp.rows[i][j];
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.bounds[j] == VarBound::Free && sgn(v[j]) != 0) return false;
    if (lp.bounds[j] == VarBound::NonNeg && sgn(v[j]) > 0) return false;
  }
  return sgn(dot(y, lp.rhs)) > 0;
}

bool lp_valid_ray(const LinearProgram& lp, const RatVec& r) {
  if (static_cast<int>(r.size()) != lp.num_vars()) return false;
  if (is_zero_vec(r)) return false;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.bounds[j] == VarBound::NonNeg && sgn(r[j]) < 0) return false;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const int c = sgn(dot(lp.rows[i], r));
    switch (lp.senses[i]) {
      case Sense::Le:
        if (c > 0) return false;
        break;
      case Sense::Eq:
        if (c != 0) return false;
        break;
      case Sense::Ge:
        if (c < 0) return false;
        break;
    }
  }
  const int g = sgn(dot(lp.cost, r));
  return lp.objective == Objective::Maximize ? g > 0 : g < 0;
}

}  // namespace natree
