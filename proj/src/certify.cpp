#include "clf/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "clf/errors.hpp"
#include "clf/parallel.hpp"
#include "clf/random.hpp"
#include "clf/verifier.hpp"

namespace clf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kChunks = 64;  // fixed, so results never depend on the thread count

struct ChunkBest {
    double value = kInf;
    Matrix a, b;
};

/// Chunk-ordered merge; strict improvement keeps the earliest chunk on ties.
CertifyOutcome merge_chunks(const std::vector<ChunkBest>& slots, std::uint64_t checked, double tol) {
    CertifyOutcome out;
    out.checked = checked;
    out.worst = kInf;
    for (const auto& s : slots) {
        if (s.value < out.worst) {
            out.worst = s.value;
            out.a_star = s.a;
            out.b_star = s.b;
        }
    }
    if (!(out.worst < kInf)) throw InvalidState("certification evaluated no points");
    out.pass = out.worst >= -tol;
    return out;
}

}  // namespace

CertifyOutcome certify_vertices(const Candidate& cand, const UncertaintySet& omega, double tol) {
    if (std::holds_alternative<EllipsoidA>(omega))
        throw ConfigError("an ellipsoidal set has no vertices; use the sampled check");

    if (const auto* poly = std::get_if<PolytopeVerts>(&omega)) {
        std::vector<ChunkBest> slot(1);
        for (const auto& [a, b] : poly->vertices) {
            const double v = objective(cand, a, b);
            if (v < slot[0].value) slot[0] = {v, a, b};
        }
        return merge_chunks(slot, poly->vertices.size(), tol);
    }

    const auto& box = std::get<IntervalAB>(omega);
    const std::uint64_t total = VertexStream(box).count();
    const std::int64_t chunks = static_cast<std::int64_t>(std::min<std::uint64_t>(kChunks, total));
    std::vector<ChunkBest> slots(static_cast<std::size_t>(chunks));
    par::for_each_chunk(chunks, [&](std::int64_t k) {
        const std::uint64_t begin = total * static_cast<std::uint64_t>(k) / static_cast<std::uint64_t>(chunks);
        const std::uint64_t end =
            total * static_cast<std::uint64_t>(k + 1) / static_cast<std::uint64_t>(chunks);
        VertexStream vs(box);
        vs.seek(begin);
        Matrix a, b;
        ChunkBest& best = slots[static_cast<std::size_t>(k)];
        for (std::uint64_t i = begin; i < end && vs.next(a, b); ++i) {
            const double v = objective(cand, a, b);
            if (v < best.value) best = {v, a, b};
        }
    });
    return merge_chunks(slots, total, tol);
}

CertifyOutcome certify_sampled(const Candidate& cand, const UncertaintySet& omega,
                               std::uint64_t n_samples, std::uint64_t seed, double tol) {
    if (n_samples == 0) throw ConfigError("sampled certification needs at least one sample");
    const std::int64_t chunks = static_cast<std::int64_t>(std::min<std::uint64_t>(kChunks, n_samples));
    std::vector<ChunkBest> slots(static_cast<std::size_t>(chunks));
    par::for_each_chunk(chunks, [&](std::int64_t k) {
        const std::uint64_t quota = n_samples / static_cast<std::uint64_t>(chunks) +
                                    (static_cast<std::uint64_t>(k) < n_samples % static_cast<std::uint64_t>(chunks) ? 1 : 0);
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k) + 1));
        ChunkBest& best = slots[static_cast<std::size_t>(k)];
        for (std::uint64_t i = 0; i < quota; ++i) {
            const auto [a, b] = sample(omega, rng);
            const double v = objective(cand, a, b);
            if (v < best.value) best = {v, a, b};
        }
    });
    return merge_chunks(slots, n_samples, tol);
}

std::pair<double, std::pair<Matrix, Matrix>> grid_oracle(const Candidate& cand,
                                                         const UncertaintySet& omega,
                                                         double resolution) {
    if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
    const BoxParam bp = box_param(omega);
    const Index d = bp.dim();
    if (d > 4) throw ConfigError("grid oracle is limited to search dimension 4");
    if (d == 0) {
        const auto [a, b] = bp.decode(Vector(0));
        return {objective(cand, a, b), {a, b}};
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(d));
    std::vector<double> steps(static_cast<std::size_t>(d));
    std::int64_t total = 1;
    for (Index j = 0; j < d; ++j) {
        const double width = bp.hi(j) - bp.lo(j);
        counts[static_cast<std::size_t>(j)] =
            std::max<std::int64_t>(1, std::llround(width / resolution));
        steps[static_cast<std::size_t>(j)] =
            width / static_cast<double>(counts[static_cast<std::size_t>(j)]);
        total *= counts[static_cast<std::size_t>(j)];
    }

    struct Slot {
        double value = kInf;
        std::int64_t flat = -1;
    };
    const std::int64_t chunks = std::min<std::int64_t>(kChunks, total);
    std::vector<Slot> slots(static_cast<std::size_t>(chunks));
    par::for_each_chunk(chunks, [&](std::int64_t k) {
        const std::int64_t begin = total * k / chunks;
        const std::int64_t end = total * (k + 1) / chunks;
        Vector z(d);
        Slot& best = slots[static_cast<std::size_t>(k)];
        for (std::int64_t flat = begin; flat < end; ++flat) {
            std::int64_t rem = flat;
            for (Index j = 0; j < d; ++j) {
                const auto nj = counts[static_cast<std::size_t>(j)];
                z(j) = bp.lo(j) + static_cast<double>(rem % nj) * steps[static_cast<std::size_t>(j)];
                rem /= nj;
            }
            if (bp.constraint(z) > 0.0) continue;
            const auto [a, b] = bp.decode(z);
            const double v = objective(cand, a, b);
            if (v < best.value) best = {v, flat};
        }
    });

    Slot win;
    for (const auto& s : slots)
        if (s.value < win.value) win = s;
    if (win.flat < 0) throw InvalidState("grid contains no feasible points");
    Vector z(d);
    std::int64_t rem = win.flat;
    for (Index j = 0; j < d; ++j) {
        const auto nj = counts[static_cast<std::size_t>(j)];
        z(j) = bp.lo(j) + static_cast<double>(rem % nj) * steps[static_cast<std::size_t>(j)];
        rem /= nj;
    }
    return {win.value, bp.decode(z)};
}

double grid_cell_diameter(const UncertaintySet& omega, double resolution) {
    const BoxParam bp = box_param(omega);
    double sum = 0.0;
    for (Index j = 0; j < bp.dim(); ++j) {
        const double width = bp.hi(j) - bp.lo(j);
        const auto nj = std::max<std::int64_t>(1, std::llround(width / resolution));
        sum += std::pow(width / static_cast<double>(nj), 2);
    }
    return std::sqrt(sum);
}

}  // namespace clf
