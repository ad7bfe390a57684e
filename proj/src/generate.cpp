#include "natree/generate.hpp"

#include "natree/na2.hpp"

#include <deque>
#include <sstream>

namespace natree {

void GeneratorConfig::validate() const {
  if (mode != "monotone" && mode != "planted-arbitrage" && mode != "random")
    throw std::invalid_argument("generator: unknown mode '" + mode + "'");
  if (d < 2) throw std::invalid_argument("generator: d must be at least 2");
  if (horizon < 1) throw std::invalid_argument("generator: horizon must be at least 1");
  if (branch_lo < 1 || branch_hi < branch_lo)
    throw std::invalid_argument("generator: bad branching range");
  if (kernels_lo < 1 || kernels_hi < kernels_lo)
    throw std::invalid_argument("generator: bad kernel count range");
  if (den_max < 1) throw std::invalid_argument("generator: bad denominator bound");
  if (sgn(cost_lo) <= 0 || cost_hi < cost_lo)
    throw std::invalid_argument("generator: bad cost range");
}

Rat Rng::rational_in(const Rat& lo, const Rat& hi, int den_max) {
  const int q = 1 + static_cast<int>(below(den_max));
  mpz_class lo_num, hi_num;
  mpz_cdiv_q(lo_num.get_mpz_t(), mpz_class(lo.get_num() * q).get_mpz_t(), lo.get_den().get_mpz_t());
  mpz_fdiv_q(hi_num.get_mpz_t(), mpz_class(hi.get_num() * q).get_mpz_t(), hi.get_den().get_mpz_t());
  if (hi_num < lo_num) {
    // denominator too coarse for the interval; fall back to the lower endpoint
    return lo;
  }
  const unsigned long span = mpz_class(hi_num - lo_num + 1).get_ui();
  mpz_class p = lo_num + mpz_class(static_cast<unsigned long>(below(span)));
  Rat r(p, q);
  r.canonicalize();
  return r;
}

namespace {

// Cheapest-route closure: direct exchanges never dearer than indirect ones.
void triangle_closure(BidAskMatrix& m) {
  for (int k = 0; k < m.d; ++k)
    for (int i = 0; i < m.d; ++i)
      for (int j = 0; j < m.d; ++j) {
        if (i == j || i == k || j == k) continue;
        Rat via = m.pi[i][k] * m.pi[k][j];
        if (via < m.pi[i][j]) m.pi[i][j] = via;
      }
}

bool frictionful(const BidAskMatrix& m) {
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) {
      if (i == j) continue;
      if (m.pi[i][j] * m.pi[j][i] <= 1) return false;
      for (int k = 0; k < m.d; ++k)
        if (k != i && k != j && m.pi[i][j] > m.pi[i][k] * m.pi[k][j]) return false;
    }
  return true;
}

}  // namespace

BidAskMatrix random_bidask(Rng& rng, int d, const GeneratorConfig& cfg) {
  // Samples are normalized by the cheapest-route closure; under that
  // normalization strictly costly round trips keep the dual interior
  // nonempty, so every accepted matrix is a valid solvency cone.
  for (int attempt = 0; attempt < 32; ++attempt) {
    BidAskMatrix m = BidAskMatrix::uniform(d, Rat(1));
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        m.pi[i][j] = rng.rational_in(cfg.cost_lo, cfg.cost_hi, cfg.den_max);
        Rat back;
        bool ok = false;
        for (int tries = 0; tries < 16 && !ok; ++tries) {
          back = rng.rational_in(cfg.cost_lo, cfg.cost_hi, cfg.den_max);
          ok = m.pi[i][j] * back > 1;
        }
        if (!ok) back = 2 / m.pi[i][j];
        m.pi[j][i] = back;
      }
    triangle_closure(m);
    if (frictionful(m)) return m;
  }
  return BidAskMatrix::uniform(d, Rat(2));
}

namespace {

RatVec random_kernel(Rng& rng, std::size_t n) {
  std::vector<unsigned> w(n, 0);
  unsigned total = 0;
  for (auto& x : w) {
    x = static_cast<unsigned>(rng.below(5));
    total += x;
  }
  if (total == 0) {
    w[rng.below(n)] = 1;
    total = 1;
  }
  RatVec k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = Rat(w[i], total);
    k[i].canonicalize();
  }
  return k;
}

MarketInstance generate_base(const GeneratorConfig& cfg, Rng& rng, bool monotone) {
  MarketInstance inst;
  inst.d = cfg.d;
  inst.tree.horizon = cfg.horizon;
  inst.meta.mode = cfg.mode;
  inst.meta.seed = cfg.seed;
  inst.meta.has_seed = true;
  inst.meta.name = cfg.name;

  struct Pending {
    int parent;
    int branch;
  };
  std::deque<Pending> queue{{-1, -1}};
  while (!queue.empty()) {
    auto [parent, branch] = queue.front();
    queue.pop_front();
    const int v = inst.tree.size();
    EventTree::Node node;
    node.parent = parent;
    node.branch = branch;
    node.time = parent < 0 ? 0 : inst.tree.nodes[parent].time + 1;
    inst.tree.nodes.push_back(node);
    if (parent >= 0) inst.tree.nodes[parent].children.push_back(v);

    BidAskMatrix pi;
    if (parent < 0 || !monotone) {
      pi = random_bidask(rng, cfg.d, cfg);
    } else {
      pi = inst.bidask[parent];
      for (int i = 0; i < cfg.d; ++i)
        for (int j = 0; j < cfg.d; ++j) {
          if (i == j) continue;
          pi.pi[i][j] *= rng.rational_in(Rat(1), Rat(2), 2);
        }
    }
    inst.bidask.push_back(std::move(pi));

    if (node.time < cfg.horizon) {
      const int nc = rng.range(cfg.branch_lo, cfg.branch_hi);
      const int nk = rng.range(cfg.kernels_lo, cfg.kernels_hi);
      std::vector<RatVec> kers;
      for (int k = 0; k < nk; ++k) kers.push_back(random_kernel(rng, nc));
      inst.kernels.push_back(std::move(kers));
      for (int b = 0; b < nc; ++b) queue.push_back({v, b});
    } else {
      inst.kernels.emplace_back();
    }
  }
  return inst;
}

}  // namespace

MarketInstance gen_instance(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  MarketInstance inst = generate_base(cfg, rng, cfg.mode == "monotone");
  if (cfg.name.empty()) {
    std::ostringstream name;
    name << cfg.mode << "-d" << cfg.d << "-T" << cfg.horizon << "-seed" << cfg.seed;
    inst.meta.name = name.str();
  }

  if (cfg.mode == "planted-arbitrage") {
    inst.finalize();
    std::vector<int> candidates;
    for (int v = 0; v < inst.tree.size(); ++v)
      if (!inst.tree.is_terminal(v) && !inst.is_polar(v)) candidates.push_back(v);
    const int target = candidates[rng.below(candidates.size())];
    const BidAskMatrix child = random_bidask(rng, cfg.d, cfg);
    for (int c : inst.tree.nodes[target].children) inst.bidask[c] = child;
    Rat factor = 4;
    for (;;) {
      BidAskMatrix parent = child;
      for (int i = 0; i < cfg.d; ++i)
        for (int j = 0; j < cfg.d; ++j)
          if (i != j) parent.pi[i][j] *= factor;
      inst.bidask[target] = parent;
      inst.finalize();
      if (!na2_local(inst, target).holds) break;
      factor *= 2;
      if (factor > 1000000) throw std::logic_error("planted-arbitrage: drop did not bite");
    }
  } else {
    inst.finalize();
  }
  return inst;
}

}  // namespace natree
