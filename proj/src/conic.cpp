// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmetro/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace qmetro {

void LinearForm::add(Index block, Index row, Index col, double weight) {
  if (weight == 0.0) return;
  if (row > col) std::swap(row, col);
  // Off-diagonal unknowns appear twice in <A, X>.
  terms_[{block, row, col}] += row == col ? weight : 0.5 * weight;
}

std::vector<SymmetricEntry> LinearForm::entries() const {
  std::vector<SymmetricEntry> out;
  out.reserve(terms_.size());
  for (const auto& [key, value] : terms_) {
    if (value == 0.0) continue;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), value});
  }
  return out;
}

Index ConicProgram::add_block(Index dim) {
  block_dims.push_back(dim);
  return static_cast<Index>(block_dims.size()) - 1;
}

void ConicProgram::add_constraint(const LinearForm& form, double value) {
  constraints.push_back(form.entries());
  rhs.push_back(value);
}

void ConicProgram::set_objective(const LinearForm& form) {
  objective = form.entries();
}

void ConicProgram::validate() const {
  auto check = [&](const SymmetricEntry& e) {
    if (e.block < 0 || e.block >= static_cast<Index>(block_dims.size()) ||
        e.row < 0 || e.col < 0 || e.row >= block_dims[e.block] ||
        e.col >= block_dims[e.block])
      throw DimensionMismatch("ConicProgram: entry outside its block");
  };
  for (const auto& e : objective) check(e);
  for (const auto& c : constraints)
    for (const auto& e : c) check(e);
  if (rhs.size() != constraints.size())
    throw DimensionMismatch("ConicProgram: rhs size != constraint count");
}

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::NearOptimal: return "near_optimal";
    case SolverStatus::Failed: return "failed";
  }
  return "unknown";
}

namespace {

using Blocks = std::vector<RealMatrix>;

// w * E_ab; a symmetric entry expands into one or two pieces.
struct Piece {
  Index a;
  Index b;
  double w;
};

struct LocalConstraint {
  Index k;
  std::vector<SymmetricEntry> entries;
  std::vector<Piece> pieces;
};

struct Layout {
  std::vector<Index> dims;
  std::vector<std::vector<LocalConstraint>> per_block;
  Blocks c;  // minimization form
  RealVector b;
  Index m = 0;
  Index n = 0;
};

Layout make_layout(const ConicProgram& p) {
  Layout L;
  L.dims = p.block_dims;
  L.m = static_cast<Index>(p.constraints.size());
  L.per_block.resize(L.dims.size());
  L.c.reserve(L.dims.size());
  for (Index d : L.dims) {
    L.c.push_back(RealMatrix::Zero(d, d));
    L.n += d;
  }
  for (const auto& e : p.objective) {
    L.c[e.block](e.row, e.col) -= e.value;
    if (e.row != e.col) L.c[e.block](e.col, e.row) -= e.value;
  }
  L.b = Eigen::Map<const RealVector>(p.rhs.data(),
                                     static_cast<Index>(p.rhs.size()));
  for (Index k = 0; k < L.m; ++k) {
    std::map<Index, LocalConstraint> by_block;
    for (const auto& e : p.constraints[k]) {
      auto& lc = by_block[e.block];
      lc.k = k;
      lc.entries.push_back(e);
      lc.pieces.push_back({e.row, e.col, e.value});
      if (e.row != e.col) lc.pieces.push_back({e.col, e.row, e.value});
    }
    for (auto& [blk, lc] : by_block) L.per_block[blk].push_back(std::move(lc));
  }
  return L;
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i].array() * b[i].array()).sum();
  return s;
}

double frobenius(const Blocks& a) { return std::sqrt(inner(a, a)); }

// <A_k, W> for every k; W need not be symmetric.
RealVector apply_a(const Layout& L, const Blocks& w) {
  RealVector out = RealVector::Zero(L.m);
  for (std::size_t blk = 0; blk < L.dims.size(); ++blk)
    for (const auto& lc : L.per_block[blk]) {
      double s = 0.0;
      for (const auto& pc : lc.pieces) s += pc.w * w[blk](pc.a, pc.b);
      out(lc.k) += s;
    }
  return out;
}

Blocks apply_at(const Layout& L, const RealVector& y) {
  Blocks out;
  out.reserve(L.dims.size());
  for (std::size_t blk = 0; blk < L.dims.size(); ++blk) {
    RealMatrix m = RealMatrix::Zero(L.dims[blk], L.dims[blk]);
    for (const auto& lc : L.per_block[blk])
      for (const auto& pc : lc.pieces) m(pc.a, pc.b) += y(lc.k) * pc.w;
    out.push_back(std::move(m));
  }
  return out;
}

// M_kl = sum_blocks tr(A_k X A_l Z^{-1}).
RealMatrix schur_complement(const Layout& L, const Blocks& x,
                            const Blocks& zinv) {
  RealMatrix m = RealMatrix::Zero(L.m, L.m);
  for (std::size_t blk = 0; blk < L.dims.size(); ++blk) {
    const auto& cons = L.per_block[blk];
    const RealMatrix& xb = x[blk];
    const RealMatrix& zb = zinv[blk];
    for (std::size_t i = 0; i < cons.size(); ++i)
      for (std::size_t j = i; j < cons.size(); ++j) {
        double s = 0.0;
        for (const auto& p : cons[i].pieces)
          for (const auto& q : cons[j].pieces)
            s += p.w * q.w * xb(p.b, q.a) * zb(q.b, p.a);
        m(cons[i].k, cons[j].k) += s;
        if (i != j) m(cons[j].k, cons[i].k) += s;
      }
  }
  return m;
}

// Largest alpha with X + alpha dX >= 0 (infinity when dX >= 0 along X).
double max_step(const Blocks& x, const Blocks& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t blk = 0; blk < x.size(); ++blk) {
    Eigen::LLT<RealMatrix> llt(x[blk]);
    if (llt.info() != Eigen::Success) return 0.0;
    RealMatrix t = llt.matrixL().solve(dx[blk]);
    t = llt.matrixL().solve(t.transpose()).transpose();
    t = 0.5 * (t + t.transpose());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<RealMatrix>(t, Eigen::EigenvaluesOnly)
            .eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

Blocks symmetrized(Blocks b) {
  for (auto& m : b) m = 0.5 * (m + m.transpose()).eval();
  return b;
}

struct Metrics {
  double pobj = 0.0;  // minimization form
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  double relgap = 0.0;
  double worst() const { return std::max({pinf, dinf, relgap}); }
};

}  // namespace

InteriorPointSolver::InteriorPointSolver(SolverOptions options)
    : options_(options) {}

ConicSolution InteriorPointSolver::solve(const ConicProgram& program) const {
  program.validate();
  const Layout L = make_layout(program);
  const double tol = options_.tolerance;
  const double norm_b = L.b.norm();
  const double norm_c = frobenius(L.c);

  // Starting point scaled to the data.
  Blocks x, z;
  for (std::size_t blk = 0; blk < L.dims.size(); ++blk) {
    const double n = static_cast<double>(L.dims[blk]);
    double ratio = 0.0;
    double norm_a = 0.0;
    for (const auto& lc : L.per_block[blk]) {
      double fa = 0.0;
      for (const auto& pc : lc.pieces) fa += pc.w * pc.w;
      fa = std::sqrt(fa);
      norm_a = std::max(norm_a, fa);
      ratio = std::max(ratio, (1.0 + std::abs(L.b(lc.k))) / (1.0 + fa));
    }
    const double xi = std::max({10.0, std::sqrt(n), std::sqrt(n) * ratio});
    const double eta = std::max(
        {10.0, std::sqrt(n), std::max(norm_a, L.c[blk].norm())});
    x.push_back(xi * RealMatrix::Identity(L.dims[blk], L.dims[blk]));
    z.push_back(eta * RealMatrix::Identity(L.dims[blk], L.dims[blk]));
  }
  RealVector y = RealVector::Zero(L.m);

  ConicSolution best;
  double best_worst = std::numeric_limits<double>::infinity();
  auto record = [&](const Metrics& mt, int iter) {
    if (mt.worst() >= best_worst) return;
    best_worst = mt.worst();
    best.primal = x;
    best.slack = z;
    best.dual = -y;
    best.primal_objective = -mt.pobj;
    best.dual_objective = -mt.dobj;
    best.primal_residual = mt.pinf;
    best.dual_residual = mt.dinf;
    best.gap = std::abs(mt.pobj - mt.dobj);
    best.iterations = iter;
  };

  bool converged = false;
  std::string message = "iteration limit reached";
  int stalls = 0;
  for (int iter = 0; iter <= options_.max_iterations; ++iter) {
    Blocks rd = apply_at(L, y);
    for (std::size_t blk = 0; blk < rd.size(); ++blk)
      rd[blk] = L.c[blk] - z[blk] - rd[blk];
    const RealVector rp = L.b - apply_a(L, x);
    Metrics mt;
    mt.pobj = inner(L.c, x);
    mt.dobj = L.b.dot(y);
    mt.pinf = rp.norm() / (1.0 + norm_b);
    mt.dinf = frobenius(rd) / (1.0 + norm_c);
    const double xz = inner(x, z);
    const double scale = 1.0 + std::abs(mt.pobj) + std::abs(mt.dobj);
    mt.relgap = std::max(std::abs(mt.pobj - mt.dobj), std::abs(xz)) / scale;
    record(mt, iter);
    if (mt.worst() < tol) {
      converged = true;
      message = "converged";
      break;
    }
    if (iter == options_.max_iterations) break;

    const double mu = xz / static_cast<double>(L.n);
    Blocks zinv;
    bool ok = true;
    for (const auto& zb : z) {
      Eigen::LLT<RealMatrix> llt(zb);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv.push_back(llt.solve(RealMatrix::Identity(zb.rows(), zb.cols())));
    }
    if (!ok) {
      message = "dual slack lost definiteness";
      break;
    }
    RealMatrix m = schur_complement(L, x, zinv);
    Eigen::LLT<RealMatrix> chol(m);
    Eigen::LDLT<RealMatrix> ldlt;
    const bool use_llt = chol.info() == Eigen::Success;
    if (!use_llt) {
      const double reg = 1e-14 * std::max(1.0, m.diagonal().maxCoeff());
      m.diagonal().array() += reg;
      ldlt.compute(m);
      if (ldlt.info() != Eigen::Success) {
        message = "Schur complement factorization failed";
        break;
      }
    }
    auto solve_m = [&](const RealVector& r) -> RealVector {
      return use_llt ? RealVector(chol.solve(r)) : RealVector(ldlt.solve(r));
    };

    Blocks x_rd_zinv(x.size());
    for (std::size_t blk = 0; blk < x.size(); ++blk)
      x_rd_zinv[blk] = x[blk] * rd[blk] * zinv[blk];
    const RealVector base = L.b + apply_a(L, x_rd_zinv);

    auto directions = [&](const RealVector& rhs, double sigma_mu,
                          const Blocks* corr, Blocks& dx, RealVector& dy,
                          Blocks& dz) {
      dy = solve_m(rhs);
      dz = apply_at(L, dy);
      dx.resize(x.size());
      for (std::size_t blk = 0; blk < x.size(); ++blk) {
        dz[blk] = rd[blk] - dz[blk];
        RealMatrix t = sigma_mu * zinv[blk] - x[blk] -
                       x[blk] * dz[blk] * zinv[blk];
        if (corr) t -= (*corr)[blk];
        dx[blk] = t;
      }
      dx = symmetrized(std::move(dx));
    };

    // Predictor.
    Blocks dx_a, dz_a;
    RealVector dy_a;
    directions(base, 0.0, nullptr, dx_a, dy_a, dz_a);
    const double ap_a = std::min(1.0, max_step(x, dx_a));
    const double ad_a = std::min(1.0, max_step(z, dz_a));
    double mu_aff = 0.0;
    for (std::size_t blk = 0; blk < x.size(); ++blk)
      mu_aff += ((x[blk] + ap_a * dx_a[blk]).array() *
                 (z[blk] + ad_a * dz_a[blk]).array())
                    .sum();
    mu_aff /= static_cast<double>(L.n);
    const double sigma =
        std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term dX_a dZ_a Z^{-1}.
    Blocks corr(x.size());
    for (std::size_t blk = 0; blk < x.size(); ++blk)
      corr[blk] = dx_a[blk] * dz_a[blk] * zinv[blk];
    Blocks zinv_scaled = zinv;
    for (auto& zb : zinv_scaled) zb *= sigma * mu;
    const RealVector rhs = base - apply_a(L, zinv_scaled) + apply_a(L, corr);
    Blocks dx, dz;
    RealVector dy;
    directions(rhs, sigma * mu, &corr, dx, dy, dz);

    const double gamma = 0.9 + 0.09 * std::min(ap_a, ad_a);
    const double ap = std::min(1.0, gamma * max_step(x, dx));
    const double ad = std::min(1.0, gamma * max_step(z, dz));
    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 3) {
        message = "step length collapsed";
        break;
      }
    } else {
      stalls = 0;
    }
    for (std::size_t blk = 0; blk < x.size(); ++blk) {
      x[blk] += ap * dx[blk];
      z[blk] += ad * dz[blk];
    }
    y += ad * dy;
  }

  best.message = message;
  if (converged)
    best.status = SolverStatus::Optimal;
  else if (best_worst <= 10.0 * tol)
    best.status = SolverStatus::NearOptimal;
  else
    best.status = SolverStatus::Failed;
  return best;
}

}  // namespace qmetro
