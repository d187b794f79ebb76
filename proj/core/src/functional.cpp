#include "wbary/functional.hpp"

#include <algorithm>
#include <cmath>

namespace wbary {

LiouvilleFunctional::LiouvilleFunctional(const SingularWeight& w, double rho, int n)
    : rho_(rho), n_(n), w_(cell_weights(w, n)) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
}

double LiouvilleFunctional::log_mass(const TorusField& u) const {
    // log sum_c W_c e^{2 u_c}, shifted by the max exponent for stability.
    double shift = -1e300;
    for (size_t c = 0; c < w_.size(); ++c)
        shift = std::max(shift, 2.0 * u[c] + std::log(w_[c]));
    double s = 0.0;
    for (size_t c = 0; c < w_.size(); ++c)
        s += std::exp(2.0 * u[c] + std::log(w_[c]) - shift);
    return shift + std::log(s);
}

double LiouvilleFunctional::value(const TorusField& u) const {
    return dirichlet_energy(u) + 2.0 * rho_ * u.mean() - rho_ * log_mass(u);
}

TorusField LiouvilleFunctional::residual(const TorusField& u) const {
    TorusField r = neg_laplacian(u);
    const double lm = log_mass(u);
    const double n2 = static_cast<double>(n_) * n_;
    for (size_t c = 0; c < w_.size(); ++c) {
        // rho * h_c e^{2u_c} / M with h_c = n^2 W_c, evaluated in log space.
        const double dens = std::exp(std::log(n2 * w_[c]) + 2.0 * u[c] - lm);
        r[c] += rho_ - rho_ * dens;
    }
    return r;
}

double LiouvilleFunctional::residual_norm(const TorusField& u) const {
    const TorusField r = residual(u);
    double s = 0.0;
    for (size_t c = 0; c < r.size(); ++c) s += r[c] * r[c];
    return std::sqrt(s / static_cast<double>(r.size()));
}

SolveResult coercive_solve(const SingularWeight& w, double rho, int n,
                           const SolveOptions& opt, const TorusField* initial) {
    const SingularConfig& cfg = w.config();
    double min_unit = 1.0;
    for (double a : cfg.alphas) min_unit = std::min(min_unit, 1.0 + a);
    if (rho >= opt.coercivity_margin * kFourPi * min_unit)
        throw CoercivityError("rho outside the guaranteed coercive range");

    LiouvilleFunctional J(w, rho, n);
    SolveResult res;
    res.u = initial ? *initial : TorusField(n, 0.0);
    double jv = J.value(res.u);
    res.j_trace.push_back(jv);

    for (int it = 0; it < opt.max_iter; ++it) {
        TorusField r = J.residual(res.u);
        double rn = 0.0;
        for (size_t c = 0; c < r.size(); ++c) rn += r[c] * r[c];
        rn = std::sqrt(rn / static_cast<double>(r.size()));
        res.residual = rn;
        res.iterations = it;
        if (rn <= opt.tol) {
            res.converged = true;
            return res;
        }
        // Inexact Newton direction.  The residual Jacobian is
        //   A v = -Delta v - 2 rho (dens . v - dens * mean(dens . v)),
        // symmetric with kernel containing the constants; positive
        // semidefinite at the coercive minimizer by the second-order
        // condition.  Solve A d = r by PCG with a Helmholtz preconditioner,
        // bailing out on negative curvature; the plain Helmholtz direction
        // alone stalls on the huge density diagonal at singular cells.
        std::vector<double> dens(r.size());
        {
            const double lm = J.log_mass(res.u);
            const double n2 = static_cast<double>(n) * n;
            for (size_t c = 0; c < dens.size(); ++c)
                dens[c] = std::exp(std::log(n2 * J.weights()[c]) + 2.0 * res.u[c] - lm);
        }
        auto apply_hess = [&](const TorusField& v) {
            TorusField out = neg_laplacian(v);
            double dv = 0.0;
            for (size_t c = 0; c < v.size(); ++c) dv += dens[c] * v[c];
            dv /= static_cast<double>(v.size());
            for (size_t c = 0; c < v.size(); ++c)
                out[c] -= 2.0 * rho * dens[c] * (v[c] - dv);
            return out;
        };
        TorusField d(n, 0.0);
        {
            TorusField pr = r;  // CG residual, starts at r - A*0
            TorusField z = inverse_helmholtz(pr, 1.0 + 2.0 * rho);
            TorusField p = z;
            double rz = 0.0;
            for (size_t c = 0; c < pr.size(); ++c) rz += pr[c] * z[c];
            const double rn0 = rn;
            for (int cg = 0; cg < 200; ++cg) {
                const TorusField ap = apply_hess(p);
                double pap = 0.0;
                for (size_t c = 0; c < p.size(); ++c) pap += p[c] * ap[c];
                if (!(pap > 0.0)) break;
                const double alpha = rz / pap;
                double rr = 0.0;
                for (size_t c = 0; c < d.size(); ++c) {
                    d[c] += alpha * p[c];
                    pr[c] -= alpha * ap[c];
                    rr += pr[c] * pr[c];
                }
                if (std::sqrt(rr / static_cast<double>(pr.size())) <= 1e-2 * rn0) break;
                z = inverse_helmholtz(pr, 1.0 + 2.0 * rho);
                double rz_new = 0.0;
                for (size_t c = 0; c < pr.size(); ++c) rz_new += pr[c] * z[c];
                const double beta = rz_new / rz;
                rz = rz_new;
                for (size_t c = 0; c < p.size(); ++c) p[c] = z[c] + beta * p[c];
            }
        }
        // Directional derivative of J: grad J = (2/n^2) residual.
        double slope = 0.0;
        for (size_t c = 0; c < r.size(); ++c) slope -= r[c] * d[c];
        slope *= 2.0 / (static_cast<double>(n) * n);
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            TorusField trial = res.u;
            for (size_t c = 0; c < trial.size(); ++c) trial[c] -= step * d[c];
            const double jt = J.value(trial);
            // Strict decrease required: once changes in J underflow double
            // precision the residual-norm polish below takes over.
            if (jt < jv && jt <= jv + opt.armijo * step * slope) {
                res.u = trial;
                jv = jt;
                res.j_trace.push_back(jv);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Decreases in J have dropped below double precision, so Armijo
            // can no longer certify progress.  Polish on the residual norm
            // instead: take the largest backtracked step that still shrinks
            // it.
            step = 1.0;
            for (int bt = 0; bt < opt.max_backtracks; ++bt) {
                TorusField trial = res.u;
                for (size_t c = 0; c < trial.size(); ++c) trial[c] -= step * d[c];
                const double rt = J.residual_norm(trial);
                if (rt < rn * (1.0 - 1e-4)) {
                    res.u = trial;
                    jv = J.value(res.u);
                    res.j_trace.push_back(jv);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if (!accepted) break;  // stuck at numerical precision
    }
    res.residual = J.residual_norm(res.u);
    res.converged = res.residual <= opt.tol;
    return res;
}

}  // namespace wbary
