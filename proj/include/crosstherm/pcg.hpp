// pcg.hpp
//
// Cell-centered finite-volume system on a structured non-uniform grid with
// harmonic-mean face transmissibilities, solved with Jacobi-preconditioned
// conjugate gradients (both operators here are symmetric diffusion operators).

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "crosstherm/errors.hpp"

namespace crosstherm {

enum class VoxelStatus : std::uint8_t {
    Unknown = 0,  // degree of freedom
    Fixed = 1,    // Dirichlet value
    Void = 2,     // excluded from the domain (no flux)
};

struct SolveReport {
    std::size_t iterations = 0;
    double residual = 0;
    double wall_time_s = 0;
    std::size_t time_steps = 0;
    double t_steady_s = 0;
};

struct FvSystem {
    std::size_t nx = 0, ny = 0, nz = 0;
    std::vector<double> tx, ty, tz;  // face transmissibilities [S] or [W/K]
    std::vector<VoxelStatus> status;
    std::vector<double> fixed_value;
    std::vector<double> diag;  // row diagonal (includes links to fixed/boundary)
    std::vector<double> rhs;

    std::size_t n() const { return nx * ny * nz; }
    std::size_t idx(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * ny + j) * nx + i;
    }
    std::size_t fx(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * ny + j) * (nx + 1) + i;  // face normal to x, i in [0, nx]
    }
    std::size_t fy(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * (ny + 1) + j) * nx + i;  // j in [0, ny]
    }
    std::size_t fz(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * ny + j) * nx + i;  // k in [0, nz]
    }

    // y = A x over unknowns; entries of x at non-unknown voxels are ignored.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(n(), 0.0);
        for (std::size_t k = 0; k < nz; ++k)
            for (std::size_t j = 0; j < ny; ++j)
                for (std::size_t i = 0; i < nx; ++i) {
                    const std::size_t v = idx(i, j, k);
                    if (status[v] != VoxelStatus::Unknown) continue;
                    double acc = diag[v] * x[v];
                    auto couple = [&](std::size_t nb, double t) {
                        if (t > 0 && status[nb] == VoxelStatus::Unknown) acc -= t * x[nb];
                    };
                    if (i > 0) couple(v - 1, tx[fx(i, j, k)]);
                    if (i + 1 < nx) couple(v + 1, tx[fx(i + 1, j, k)]);
                    if (j > 0) couple(v - nx, ty[fy(i, j, k)]);
                    if (j + 1 < ny) couple(v + nx, ty[fy(i, j + 1, k)]);
                    if (k > 0) couple(v - nx * ny, tz[fz(i, j, k)]);
                    if (k + 1 < nz) couple(v + nx * ny, tz[fz(i, j, k + 1)]);
                    y[v] = acc;
                }
    }
};

/// Assembles the diffusion system -div(c grad u) = q for a per-voxel
/// conductivity array. When `boundary_dirichlet` is set, all six outer walls
/// hold u = 0 through half-cell transmissibilities; otherwise walls are
/// no-flux. Fixed voxels contribute to neighbours' diagonal and rhs.
inline FvSystem assemble_fv(std::size_t nx, std::size_t ny, std::size_t nz,
                            const std::vector<double>& dxs, const std::vector<double>& dys,
                            const std::vector<double>& dzs, const std::vector<double>& cond,
                            const std::vector<VoxelStatus>& status,
                            const std::vector<double>& fixed_value, bool boundary_dirichlet) {
    FvSystem s;
    s.nx = nx;
    s.ny = ny;
    s.nz = nz;
    s.status = status;
    s.fixed_value = fixed_value;
    s.tx.assign((nx + 1) * ny * nz, 0.0);
    s.ty.assign(nx * (ny + 1) * nz, 0.0);
    s.tz.assign(nx * ny * (nz + 1), 0.0);
    s.diag.assign(s.n(), 0.0);
    s.rhs.assign(s.n(), 0.0);

    auto resist = [&](std::size_t v, double half_len) -> double {
        return cond[v] > 0 ? half_len / cond[v] : std::numeric_limits<double>::infinity();
    };

    // interior faces
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j) {
            const double area_yz = dys[j] * dzs[k];
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                const std::size_t a = s.idx(i, j, k), b = a + 1;
                const double r = resist(a, 0.5 * dxs[i]) + resist(b, 0.5 * dxs[i + 1]);
                if (std::isfinite(r) && r > 0) s.tx[s.fx(i + 1, j, k)] = area_yz / r;
            }
        }
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j + 1 < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t a = s.idx(i, j, k), b = a + nx;
                const double area = dxs[i] * dzs[k];
                const double r = resist(a, 0.5 * dys[j]) + resist(b, 0.5 * dys[j + 1]);
                if (std::isfinite(r) && r > 0) s.ty[s.fy(i, j + 1, k)] = area / r;
            }
    for (std::size_t k = 0; k + 1 < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t a = s.idx(i, j, k), b = a + nx * ny;
                const double area = dxs[i] * dys[j];
                const double r = resist(a, 0.5 * dzs[k]) + resist(b, 0.5 * dzs[k + 1]);
                if (std::isfinite(r) && r > 0) s.tz[s.fz(i, j, k + 1)] = area / r;
            }

    if (boundary_dirichlet) {
        for (std::size_t k = 0; k < nz; ++k)
            for (std::size_t j = 0; j < ny; ++j) {
                const double area = dys[j] * dzs[k];
                std::size_t v = s.idx(0, j, k);
                double r = resist(v, 0.5 * dxs[0]);
                if (std::isfinite(r) && r > 0) s.tx[s.fx(0, j, k)] = area / r;
                v = s.idx(nx - 1, j, k);
                r = resist(v, 0.5 * dxs[nx - 1]);
                if (std::isfinite(r) && r > 0) s.tx[s.fx(nx, j, k)] = area / r;
            }
        for (std::size_t k = 0; k < nz; ++k)
            for (std::size_t i = 0; i < nx; ++i) {
                const double rz = dxs[i];
                std::size_t v = s.idx(i, 0, k);
                double r = resist(v, 0.5 * dys[0]);
                if (std::isfinite(r) && r > 0) s.ty[s.fy(i, 0, k)] = rz * dzs[k] / r;
                v = s.idx(i, ny - 1, k);
                r = resist(v, 0.5 * dys[ny - 1]);
                if (std::isfinite(r) && r > 0) s.ty[s.fy(i, ny, k)] = rz * dzs[k] / r;
            }
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const double area = dxs[i] * dys[j];
                std::size_t v = s.idx(i, j, 0);
                double r = resist(v, 0.5 * dzs[0]);
                if (std::isfinite(r) && r > 0) s.tz[s.fz(i, j, 0)] = area / r;
                v = s.idx(i, j, nz - 1);
                r = resist(v, 0.5 * dzs[nz - 1]);
                if (std::isfinite(r) && r > 0) s.tz[s.fz(i, j, nz)] = area / r;
            }
    }

    // diagonal + Dirichlet contributions to rhs
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t v = s.idx(i, j, k);
                if (status[v] != VoxelStatus::Unknown) continue;
                double d = 0;
                auto face = [&](double t, std::ptrdiff_t nb_off, bool has_nb) {
                    if (t <= 0) return;
                    if (!has_nb) {  // outer wall, u = 0
                        d += t;
                        return;
                    }
                    const std::size_t nb = static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(v) + nb_off);
                    if (status[nb] == VoxelStatus::Unknown) {
                        d += t;
                    } else if (status[nb] == VoxelStatus::Fixed) {
                        d += t;
                        s.rhs[v] += t * fixed_value[nb];
                    }
                    // Void neighbours have zero transmissibility by construction.
                };
                face(s.tx[s.fx(i, j, k)], -1, i > 0);
                face(s.tx[s.fx(i + 1, j, k)], +1, i + 1 < nx);
                face(s.ty[s.fy(i, j, k)], -static_cast<std::ptrdiff_t>(nx), j > 0);
                face(s.ty[s.fy(i, j + 1, k)], static_cast<std::ptrdiff_t>(nx), j + 1 < ny);
                face(s.tz[s.fz(i, j, k)], -static_cast<std::ptrdiff_t>(nx * ny), k > 0);
                face(s.tz[s.fz(i, j, k + 1)], static_cast<std::ptrdiff_t>(nx * ny), k + 1 < nz);
                s.diag[v] = d;
            }
    return s;
}

/// Jacobi-preconditioned CG. `x` carries the initial guess and the solution
/// (entries at non-unknown voxels are left untouched). Residual criterion is
/// ||r||_2 <= tol * ||b||_2.
inline SolveReport pcg_solve(const FvSystem& s, std::vector<double>& x, double tol,
                             std::size_t max_iter = 0) {
    const std::size_t n = s.n();
    if (max_iter == 0)
        max_iter = std::max<std::size_t>(500, 50 * static_cast<std::size_t>(std::cbrt(double(n))) *
                                                  3);
    std::vector<double> r(n, 0.0), z(n, 0.0), p(n, 0.0), q(n, 0.0);

    double bnorm2 = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (s.status[v] == VoxelStatus::Unknown) bnorm2 += s.rhs[v] * s.rhs[v];
    SolveReport rep;
    if (bnorm2 == 0) {
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown) x[v] = 0.0;
        return rep;
    }

    s.apply(x, q);
    for (std::size_t v = 0; v < n; ++v)
        if (s.status[v] == VoxelStatus::Unknown) r[v] = s.rhs[v] - q[v];

    auto precond = [&]() {
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown)
                z[v] = s.diag[v] > 0 ? r[v] / s.diag[v] : r[v];
    };
    precond();
    p = z;
    double rz = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (s.status[v] == VoxelStatus::Unknown) rz += r[v] * z[v];

    std::vector<double> history;
    const double target2 = tol * tol * bnorm2;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        s.apply(p, q);
        double pq = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown) pq += p[v] * q[v];
        if (pq <= 0) throw SolverError("PCG breakdown: operator not positive definite", history);
        const double alpha = rz / pq;
        double rnorm2 = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown) {
                x[v] += alpha * p[v];
                r[v] -= alpha * q[v];
                rnorm2 += r[v] * r[v];
            }
        history.push_back(std::sqrt(rnorm2 / bnorm2));
        if (rnorm2 <= target2) {
            rep.iterations = it;
            rep.residual = std::sqrt(rnorm2 / bnorm2);
            return rep;
        }
        precond();
        double rz_new = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown) rz_new += r[v] * z[v];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t v = 0; v < n; ++v)
            if (s.status[v] == VoxelStatus::Unknown) p[v] = z[v] + beta * p[v];
    }
    throw SolverError("PCG did not converge in " + std::to_string(max_iter) + " iterations",
                      history);
}

}  // namespace crosstherm
