#include <srn/qp.hpp>

#include <srn/errors.hpp>
#include <srn/smallmat.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace srn {

namespace {

// Constraint catalogue: index 0 is the equality sum(v) = 1 (added once from
// the origin and never dropped), indices 1..d are the bounds v_j >= 0, and
// the remaining indices are the caller's rows with right-hand side 0.
struct Catalogue {
    int d;
    const std::vector<std::vector<double>>* rows;

    int size() const { return 1 + d + static_cast<int>(rows->size()); }
    double rhs(int c) const { return c == 0 ? 1.0 : 0.0; }
    void normal(int c, std::vector<double>& a) const {
        a.assign(static_cast<size_t>(d), 0.0);
        if (c == 0) {
            a.assign(static_cast<size_t>(d), 1.0);
        } else if (c <= d) {
            a[static_cast<size_t>(c - 1)] = 1.0;
        } else {
            a = (*rows)[static_cast<size_t>(c - 1 - d)];
        }
    }
};

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace

QpSolution solve_simplex_qp(const QpProblem& prob) {
    const int d = prob.d;
    if (d <= 0) throw InternalError("qp dimension must be positive");
    for (const auto& r : prob.ineq_rows)
        if (static_cast<int>(r.size()) != d) throw InternalError("qp row width mismatch");

    const Catalogue cat{d, &prob.ineq_rows};
    const int m = cat.size();
    const double tol = 1e-11;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> v(static_cast<size_t>(d), 0.0);
    std::vector<int> act;
    std::vector<double> u;
    std::vector<std::vector<double>> an; // active normals
    std::vector<bool> is_active(static_cast<size_t>(m), false);

    std::vector<double> np(static_cast<size_t>(d)), z(static_cast<size_t>(d)), a(static_cast<size_t>(d));
    int iters = 0;
    const int max_iters = 200 * (m + d);

    while (true) {
        if (++iters > max_iters) throw NumericalError("qp iteration limit reached");

        // Most violated inactive constraint; lowest index breaks ties.
        int p = -1;
        double worst = -tol;
        for (int c = 0; c < m; ++c) {
            if (is_active[static_cast<size_t>(c)]) continue;
            cat.normal(c, a);
            const double s = dot(a, v) - cat.rhs(c);
            if (s < worst) {
                worst = s;
                p = c;
            }
        }
        if (p < 0) break; // all constraints satisfied: optimal

        cat.normal(p, np);
        double s_p = dot(np, v) - cat.rhs(p);
        double u_p = 0.0;

        while (true) {
            // r = argmin || N r - np ||, z = residual (step direction).
            const int na = static_cast<int>(act.size());
            std::vector<double> r(static_cast<size_t>(na), 0.0);
            if (na > 0) {
                Mat<double> M(na, na);
                for (int i = 0; i < na; ++i)
                    for (int j = 0; j < na; ++j) M(i, j) = dot(an[static_cast<size_t>(i)], an[static_cast<size_t>(j)]);
                std::vector<double> q(static_cast<size_t>(na));
                for (int i = 0; i < na; ++i) q[static_cast<size_t>(i)] = dot(an[static_cast<size_t>(i)], np);
                try {
                    r = solve_linear(M, q);
                } catch (const NumericalError&) {
                    throw NumericalError("qp active set became numerically dependent");
                }
            }
            for (int j = 0; j < d; ++j) {
                double zz = np[static_cast<size_t>(j)];
                for (int i = 0; i < na; ++i) zz -= r[static_cast<size_t>(i)] * an[static_cast<size_t>(i)][static_cast<size_t>(j)];
                z[static_cast<size_t>(j)] = zz;
            }
            const double znorm2 = dot(z, z);
            const bool z_zero = znorm2 <= 1e-18 * d;

            double t2 = inf;
            if (!z_zero) t2 = -s_p / znorm2;

            // Blocking constraint: smallest u_k / r_k over active inequalities
            // with r_k > 0; lowest constraint index breaks ties.
            double t1 = inf;
            int block = -1;
            for (int k = 0; k < na; ++k) {
                if (act[static_cast<size_t>(k)] == 0) continue; // equality never drops
                if (r[static_cast<size_t>(k)] > 1e-12) {
                    const double cand = u[static_cast<size_t>(k)] / r[static_cast<size_t>(k)];
                    if (cand < t1 * (1.0 - 1e-12) - 1e-300 ||
                        (block >= 0 && std::abs(cand - t1) <= 1e-12 * (1.0 + std::abs(t1)) &&
                         act[static_cast<size_t>(k)] < act[static_cast<size_t>(block)])) {
                        t1 = cand;
                        block = k;
                    }
                }
            }

            if (z_zero && block < 0)
                throw NumericalError("qp infeasible: constraint cone admits no point");

            const double t = std::min(t1, t2);
            if (!z_zero && t > 0)
                for (int j = 0; j < d; ++j) v[static_cast<size_t>(j)] += t * z[static_cast<size_t>(j)];
            for (int k = 0; k < na; ++k) u[static_cast<size_t>(k)] -= t * r[static_cast<size_t>(k)];
            u_p += t;
            if (!z_zero) s_p += t * znorm2;

            if (t2 <= t1) { // full step: p becomes active
                act.push_back(p);
                u.push_back(u_p);
                an.push_back(np);
                is_active[static_cast<size_t>(p)] = true;
                break;
            }
            // partial step: drop the blocking constraint and retry
            is_active[static_cast<size_t>(act[static_cast<size_t>(block)])] = false;
            act.erase(act.begin() + block);
            u.erase(u.begin() + block);
            an.erase(an.begin() + block);
        }
    }

    QpSolution sol;
    sol.v = v;
    sol.iterations = iters;
    sol.active_count = static_cast<int>(act.size());

    // KKT residual: stationarity, feasibility, dual sign, complementarity.
    double res = 0.0;
    for (int j = 0; j < d; ++j) {
        double w = v[static_cast<size_t>(j)];
        for (size_t k = 0; k < act.size(); ++k) w -= u[k] * an[k][static_cast<size_t>(j)];
        res = std::max(res, std::abs(w));
    }
    for (int c = 0; c < m; ++c) {
        cat.normal(c, a);
        const double s = dot(a, v) - cat.rhs(c);
        res = std::max(res, c == 0 ? std::abs(s) : std::max(0.0, -s));
    }
    for (size_t k = 0; k < act.size(); ++k) {
        if (act[k] != 0) res = std::max(res, std::max(0.0, -u[k]));
        cat.normal(act[k], a);
        res = std::max(res, std::abs(u[k] * (dot(a, v) - cat.rhs(act[k]))));
    }
    sol.kkt_residual = res;
    return sol;
}

} // namespace srn
