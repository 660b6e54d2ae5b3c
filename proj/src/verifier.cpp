#include "clf/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "clf/errors.hpp"
#include "clf/spectral.hpp"

namespace clf {

using spectral::op_norm;
using spectral::smallest_eig;
using spectral::xi;

namespace {

constexpr double kJonesBalance = 1e-4;   // depth/breadth balance in selection
constexpr double kEigGapTol = 1e-8;      // below this, eigenvalue gradient is unreliable
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_objective(const Candidate& cand, const Matrix& a, const Matrix& b) {
    return spectral::lambda_min(xi(cand.P, closed_loop(a, b, cand.K)));
}

/// Objective value, smallest eigenvector of Xi, and the eigen-gap, for one
/// decoded point.
struct EigEval {
    double value;
    Vector evec;
    double gap;
};

EigEval eig_eval(const Candidate& cand, const Matrix& a, const Matrix& b) {
    const auto se = smallest_eig(xi(cand.P, closed_loop(a, b, cand.K)));
    return {se.value, se.vector, se.gap};
}

/// Gradient of the objective in box coordinates at z, reusing the
/// eigenvector when the smallest eigenvalue is simple; central finite
/// differences otherwise. Returns the number of extra objective evaluations.
std::uint64_t objective_gradient(const Candidate& cand, const BoxParam& bp, const Vector& z,
                                 const EigEval& at, Vector& grad) {
    const Index d = bp.dim();
    grad.resize(d);
    if (at.gap >= kEigGapTol) {
        const Index n = cand.P.order();
        const Vector v1 = at.evec.head(n);
        const Vector pv2 = cand.P.mat() * at.evec.tail(n);
        for (Index j = 0; j < d; ++j) {
            const auto& [da, db] = bp.basis[static_cast<std::size_t>(j)];
            const Matrix dacl = da + db * cand.K;
            grad(j) = 2.0 * pv2.dot(dacl * v1);
        }
        return 0;
    }
    // Central differences with a step relative to each box width.
    for (Index j = 0; j < d; ++j) {
        const double h = 1e-6 * std::max(bp.hi(j) - bp.lo(j), 1e-12);
        Vector zp = z, zm = z;
        zp(j) += h;
        zm(j) -= h;
        const auto [ap, bpn] = bp.decode(zp);
        const auto [am, bm] = bp.decode(zm);
        grad(j) = (eval_objective(cand, ap, bpn) - eval_objective(cand, am, bm)) / (2.0 * h);
    }
    return 2 * static_cast<std::uint64_t>(d);
}

/// One hyperrectangle of the partition, in unit-cube coordinates.
struct Cell {
    Vector center;
    std::vector<int> splits;  // trisection count per dimension
    double value;             // penalized objective at the center
};

/// Cells sharing a side-length multiset (hence a diameter).
struct Group {
    std::vector<std::size_t> members;
    double best_val = kInf;
    std::size_t best_idx = 0;
    bool dirty = false;

    void add(std::size_t idx, double val) {
        members.push_back(idx);
        if (!dirty && (val < best_val || (val == best_val && idx < best_idx))) {
            best_val = val;
            best_idx = idx;
        }
    }
    void remove(std::size_t idx) {
        auto it = std::find(members.begin(), members.end(), idx);
        if (it != members.end()) {
            *it = members.back();
            members.pop_back();
        }
        if (idx == best_idx) dirty = true;
    }
    void refresh(const std::vector<Cell>& cells) {
        if (!dirty) return;
        best_val = kInf;
        best_idx = 0;
        for (std::size_t idx : members) {
            const double v = cells[idx].value;
            if (v < best_val || (v == best_val && idx < best_idx)) {
                best_val = v;
                best_idx = idx;
            }
        }
        dirty = false;
    }
};

std::vector<int> group_key(const std::vector<int>& splits) {
    std::vector<int> key = splits;
    std::sort(key.begin(), key.end());
    return key;
}

double unit_diameter(const std::vector<int>& splits) {
    double sum = 0.0;
    for (int s : splits) sum += std::pow(9.0, -s);
    return 0.5 * std::sqrt(sum);
}

}  // namespace

double objective(const Candidate& cand, const Eigen::Ref<const Matrix>& a,
                 const Eigen::Ref<const Matrix>& b) {
    return eval_objective(cand, a, b);
}

Vector objective_box_gradient(const Candidate& cand, const BoxParam& bp, const Vector& z) {
    const auto [a, b] = bp.decode(z);
    const EigEval at = eig_eval(cand, a, b);
    Vector grad;
    objective_gradient(cand, bp, z, at, grad);
    return grad;
}

LipschitzBudget lipschitz_budget(const Candidate& cand, const ProblemSpec& spec) {
    LipschitzBudget lb;
    lb.ell_cl = 1.0 / spec.eps;
    lb.ell_ab = lb.ell_cl * std::max(1.0, op_norm(cand.K));
    lb.safe_radius = (spec.eps * spec.eps) / (spec.eta * spec.eta);
    return lb;
}

RefineResult sensitivity_refine(const Candidate& cand, const UncertaintySet& omega,
                                const std::pair<Matrix, Matrix>& start, int max_steps) {
    const BoxParam bp = box_param(omega);
    const Index d = bp.dim();
    RefineResult out;
    if (d == 0) {
        out.point = start;
        out.value = eval_objective(cand, start.first, start.second);
        out.evaluations = 1;
        return out;
    }
    const Vector widths = bp.hi - bp.lo;
    const double max_width = widths.maxCoeff();

    Vector z = bp.project(bp.encode(start.first, start.second));
    auto [a, b] = bp.decode(z);
    EigEval cur = eig_eval(cand, a, b);
    out.evaluations = 1;
    out.point = {a, b};
    out.value = cur.value;

    double alpha = 0.25 * max_width;
    Vector grad;
    for (int step = 0; step < max_steps; ++step) {
        out.evaluations += objective_gradient(cand, bp, z, cur, grad);
        const double gnorm = grad.norm();
        if (!(gnorm > 1e-14 * std::max(1.0, std::abs(out.value)))) break;
        const Vector dir = -grad / gnorm;
        bool improved = false;
        while (alpha >= 1e-12 * max_width) {
            // Project the raw step rather than clipping it into the box
            // first: clipping kills the tangential component along a simplex
            // face, stalling descent toward low-dimensional faces.
            const Vector zt = bp.project(Vector(z + alpha * dir));
            const auto [at, bt] = bp.decode(zt);
            const EigEval trial = eig_eval(cand, at, bt);
            ++out.evaluations;
            if (trial.value < out.value - 1e-12 * std::max(1.0, std::abs(out.value))) {
                z = zt;
                cur = trial;
                out.value = trial.value;
                out.point = {at, bt};
                improved = true;
                alpha = std::min(2.0 * alpha, max_width);
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) break;
    }
    return out;
}

VerifierResult global_minimize(const Candidate& cand, const UncertaintySet& omega,
                               std::uint64_t budget, double threshold) {
    if (budget == 0) throw ConfigError("global search budget must be positive");
    const BoxParam bp = box_param(omega);
    const Index d = bp.dim();

    VerifierResult res;
    res.method = VerifyMethod::Global;

    if (d == 0) {
        const auto [a, b] = bp.decode(Vector(0));
        res.lambda_hat = eval_objective(cand, a, b);
        res.a_star = a;
        res.b_star = b;
        res.evaluations = 1;
        res.certified = res.lambda_hat >= threshold;
        res.lipschitz_gap = 0.0;
        return res;
    }

    const Vector widths = bp.hi - bp.lo;
    // Penalty steepness from the computable Lipschitz bound 2*||P||*max(1,||K||)
    // (which never exceeds twice the eps-based budget constant).
    const double ell_pen = 2.0 * op_norm(cand.P.mat()) * std::max(1.0, op_norm(cand.K));
    const double rho = 10.0 * ell_pen * std::max(bp.constraint_grad_scale, 1.0);

    std::vector<Cell> cells;
    std::map<std::vector<int>, Group> groups;
    std::uint64_t evals = 0;

    bool have_feasible = false;
    double vmax = 0.0;                         // worst feasible value seen
    double best_feas = kInf;                   // best feasible value seen
    Vector best_feas_z;
    double best_pen = kInf;                    // best penalized value (any point)
    Vector best_pen_z;
    double fmin_all = kInf;                    // selection reference
    bool violator = false;
    Vector violator_z;
    double violator_val = 0.0;

    auto evaluate = [&](const Vector& unit) -> double {
        const Vector z = bp.lo + unit.cwiseProduct(widths).eval();
        const double g = bp.constraint(z);
        ++evals;
        double val;
        if (g <= 0.0) {
            const auto [a, b] = bp.decode(z);
            val = eval_objective(cand, a, b);
            have_feasible = true;
            vmax = std::max(vmax, val);
            if (val < best_feas) {
                best_feas = val;
                best_feas_z = z;
            }
            if (val < threshold && !violator) {
                violator = true;
                violator_z = z;
                violator_val = val;
            }
        } else {
            val = (have_feasible ? vmax : 0.0) + rho * g;
        }
        if (val < best_pen) {
            best_pen = val;
            best_pen_z = z;
        }
        fmin_all = std::min(fmin_all, val);
        return val;
    };

    auto add_cell = [&](Cell&& cell) {
        const std::size_t idx = cells.size();
        const double v = cell.value;
        auto key = group_key(cell.splits);
        cells.push_back(std::move(cell));
        groups[key].add(idx, v);
    };

    {
        Cell root;
        root.center = Vector::Constant(d, 0.5);
        root.splits.assign(static_cast<std::size_t>(d), 0);
        root.value = evaluate(root.center);
        add_cell(std::move(root));
    }

    while (!violator && evals + 2 <= budget) {
        // Potentially-optimal selection: one representative per diameter
        // class, then the lower-envelope slope test.
        struct Entry {
            double diam;
            double val;
            std::size_t idx;
        };
        std::vector<Entry> entries;
        for (auto& [key, grp] : groups) {
            if (grp.members.empty()) continue;
            grp.refresh(cells);
            entries.push_back({unit_diameter(key), grp.best_val, grp.best_idx});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
            if (x.diam != y.diam) return x.diam < y.diam;
            if (x.val != y.val) return x.val < y.val;
            return x.idx < y.idx;
        });
        // Collapse equal diameters to their best representative.
        std::vector<Entry> cols;
        for (const auto& e : entries)
            if (cols.empty() || cols.back().diam != e.diam) cols.push_back(e);

        const double fstar = fmin_all - kJonesBalance * std::max(std::abs(fmin_all), 1e-8);
        std::vector<std::size_t> selected;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double slope_lo = -kInf, slope_hi = kInf;
            for (std::size_t i = 0; i < j; ++i)
                slope_lo = std::max(slope_lo, (cols[j].val - cols[i].val) / (cols[j].diam - cols[i].diam));
            for (std::size_t i = j + 1; i < cols.size(); ++i)
                slope_hi = std::min(slope_hi, (cols[i].val - cols[j].val) / (cols[i].diam - cols[j].diam));
            if (slope_lo > slope_hi + 1e-12) continue;
            if (j + 1 < cols.size() && cols[j].val - slope_hi * cols[j].diam > fstar + 1e-12) continue;
            selected.push_back(cols[j].idx);
        }
        if (selected.empty()) break;  // cannot happen: the largest class always qualifies

        bool out_of_budget = false;
        for (std::size_t idx : selected) {
            if (violator) break;
            if (evals + 2 > budget) {
                out_of_budget = true;
                break;
            }
            const int smin = *std::min_element(cells[idx].splits.begin(), cells[idx].splits.end());
            std::vector<Index> dims;
            for (Index j = 0; j < d; ++j)
                if (cells[idx].splits[static_cast<std::size_t>(j)] == smin) dims.push_back(j);
            const std::uint64_t room = (budget - evals) / 2;
            if (dims.size() > room) dims.resize(static_cast<std::size_t>(room));
            if (dims.empty()) {
                out_of_budget = true;
                break;
            }
            const double delta = std::pow(3.0, -(smin + 1));

            struct Child {
                Index dim;
                double w;  // min of the two offset values, for split ordering
                double up_val, dn_val;
                Vector up, dn;
            };
            std::vector<Child> children;
            for (Index j : dims) {
                Child ch;
                ch.dim = j;
                ch.up = cells[idx].center;
                ch.up(j) += delta;
                ch.dn = cells[idx].center;
                ch.dn(j) -= delta;
                ch.up_val = evaluate(ch.up);
                if (violator) break;
                ch.dn_val = evaluate(ch.dn);
                ch.w = std::min(ch.up_val, ch.dn_val);
                children.push_back(std::move(ch));
                if (violator) break;
            }
            if (violator) break;

            std::sort(children.begin(), children.end(), [](const Child& x, const Child& y) {
                if (x.w != y.w) return x.w < y.w;
                return x.dim < y.dim;
            });

            const auto old_key = group_key(cells[idx].splits);
            std::vector<int> cur = cells[idx].splits;
            for (const auto& ch : children) {
                ++cur[static_cast<std::size_t>(ch.dim)];
                Cell up{ch.up, cur, ch.up_val};
                Cell dn{ch.dn, cur, ch.dn_val};
                add_cell(std::move(up));
                add_cell(std::move(dn));
            }
            groups[old_key].remove(idx);
            cells[idx].splits = cur;
            groups[group_key(cur)].add(idx, cells[idx].value);
        }
        if (out_of_budget) break;
    }

    if (violator) {
        const auto [a, b] = bp.decode(violator_z);
        res.lambda_hat = violator_val;
        res.a_star = a;
        res.b_star = b;
        res.evaluations = evals;
        res.certified = false;
    } else {
        // Polish the incumbent (projecting it into the set if the best point
        // came from the penalized surface), then report the better of the two.
        const Vector zstart = have_feasible ? best_feas_z : bp.project(best_pen_z);
        const auto [sa, sb] = bp.decode(zstart);
        const RefineResult rr = sensitivity_refine(cand, omega, {sa, sb}, 50);
        evals += rr.evaluations;
        if (have_feasible && best_feas <= rr.value) {
            const auto [a, b] = bp.decode(best_feas_z);
            res.lambda_hat = best_feas;
            res.a_star = a;
            res.b_star = b;
        } else {
            res.lambda_hat = rr.value;
            res.a_star = rr.point.first;
            res.b_star = rr.point.second;
        }
        res.evaluations = evals;
        res.certified = res.lambda_hat >= threshold;
    }

    // Largest unexplored half-diagonal in box coordinates (diagnostic).
    double gap = 0.0;
    for (const auto& cell : cells) {
        double sum = 0.0;
        for (Index j = 0; j < d; ++j)
            sum += std::pow(widths(j) * std::pow(3.0, -cell.splits[static_cast<std::size_t>(j)]), 2);
        gap = std::max(gap, 0.5 * std::sqrt(sum));
    }
    res.lipschitz_gap = gap;
    return res;
}

VerifierResult verify(const Candidate& cand, const ProblemSpec& spec, std::mt19937_64& rng) {
    const BoxParam bp = box_param(spec.omega);
    const LipschitzBudget lb = lipschitz_budget(cand, spec);
    std::uint64_t local_evals = 0;
    for (int t = 0; t < spec.n_t; ++t) {
        const auto start = sample(spec.omega, rng);
        const RefineResult rr = sensitivity_refine(cand, spec.omega, start, 100);
        local_evals += rr.evaluations;
        if (rr.value < spec.accept_threshold) {
            VerifierResult res;
            res.lambda_hat = rr.value;
            res.a_star = rr.point.first;
            res.b_star = rr.point.second;
            res.method = VerifyMethod::Sensitivity;
            res.evaluations = local_evals;
            res.certified = false;
            res.lipschitz_gap = 0.0;
            return res;
        }
    }
    VerifierResult res = global_minimize(cand, spec.omega, spec.resolved_budget(bp.dim()),
                                         spec.accept_threshold);
    res.evaluations += local_evals;
    res.lipschitz_gap *= lb.ell_ab;
    return res;
}

}  // namespace clf
