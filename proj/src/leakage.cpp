#include "sidechan/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidechan/numeric.hpp"
#include "sidechan/signal.hpp"
#include "sidechan/synth.hpp"
#include "sidechan/xcorr.hpp"

namespace sidechan {

namespace {

struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double total() const { return sum + comp; }
};

double xlog2x_ratio(double q, double s) { return q > 0.0 ? q * std::log2(q / s) : 0.0; }

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Eq8Literal: return "eq8";
        case Method::Guessing: return "guessing";
        case Method::MonteCarlo: return "mc";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
    if (text == "exact") return Method::Exact;
    if (text == "eq8") return Method::Eq8Literal;
    if (text == "guessing") return Method::Guessing;
    if (text == "mc" || text == "montecarlo") return Method::MonteCarlo;
    return std::nullopt;
}

BasisPair::BasisPair(Basis label, SampledDistribution1D d0, SampledDistribution1D d1,
                     double prior0)
    : label_(label), prior0_(prior0), dists_(std::pair{std::move(d0), std::move(d1)}) {
    const auto& [a, b] = dists_1d();
    if (!a.axis().same_grid(b.axis())) {
        raise(ErrorCode::GridMismatch, "basis pair requires a shared observation grid");
    }
    if (!a.normalized() || !b.normalized()) {
        raise(ErrorCode::NotNormalized, "basis pair distributions must be normalized");
    }
    if (!(prior0 > 0.0 && prior0 < 1.0)) {
        raise(ErrorCode::OutOfRange, "prior must lie in (0, 1)");
    }
}

BasisPair::BasisPair(Basis label, SpatialMode2D d0, SpatialMode2D d1, double prior0)
    : label_(label), prior0_(prior0), dists_(std::pair{std::move(d0), std::move(d1)}) {
    const auto& [a, b] = dists_2d();
    if (!a.x_axis().same_grid(b.x_axis()) || !a.y_axis().same_grid(b.y_axis())) {
        raise(ErrorCode::GridMismatch, "basis pair requires a shared pixel grid");
    }
    if (!a.normalized() || !b.normalized()) {
        raise(ErrorCode::NotNormalized, "basis pair modes must be normalized");
    }
    if (!(prior0 > 0.0 && prior0 < 1.0)) {
        raise(ErrorCode::OutOfRange, "prior must lie in (0, 1)");
    }
}

bool BasisPair::is_2d() const noexcept { return dists_.index() == 1; }

std::size_t BasisPair::cell_count() const noexcept {
    if (is_2d()) {
        const auto& m = std::get<1>(dists_).first;
        return m.width() * m.height();
    }
    return std::get<0>(dists_).first.size();
}

const std::pair<SampledDistribution1D, SampledDistribution1D>& BasisPair::dists_1d() const {
    return std::get<0>(dists_);
}

const std::pair<SpatialMode2D, SpatialMode2D>& BasisPair::dists_2d() const {
    return std::get<1>(dists_);
}

BasisPair::Masses BasisPair::masses() const {
    Masses out;
    if (is_2d()) {
        const auto& [a, b] = dists_2d();
        const double cell = a.cell();
        out.m0.resize(a.intensity().size());
        out.m1.resize(b.intensity().size());
        for (std::size_t i = 0; i < out.m0.size(); ++i) out.m0[i] = a.intensity()[i] * cell;
        for (std::size_t i = 0; i < out.m1.size(); ++i) out.m1[i] = b.intensity()[i] * cell;
    } else {
        const auto& [a, b] = dists_1d();
        const double step = a.axis().step();
        out.m0.resize(a.size());
        out.m1.resize(b.size());
        for (std::size_t i = 0; i < out.m0.size(); ++i) out.m0[i] = a.density()[i] * step;
        for (std::size_t i = 0; i < out.m1.size(); ++i) out.m1[i] = b.density()[i] * step;
    }
    return out;
}

double BasisPair::overlap() const {
    if (is_2d()) {
        const auto& [a, b] = dists_2d();
        return cross_correlation_2d(a, b);
    }
    const auto& [a, b] = dists_1d();
    return overlap_at_zero(a, b);
}

BasisPair BasisPair::coarsened(std::size_t max_cells) const {
    if (max_cells < 2) {
        raise(ErrorCode::OutOfRange, "coarsening needs at least 2 cells");
    }
    if (cell_count() <= max_cells) return *this;
    if (is_2d()) {
        const auto& [a, b] = dists_2d();
        std::size_t factor = 2;
        while (((a.width() + factor - 1) / factor) * ((a.height() + factor - 1) / factor) >
               max_cells) {
            ++factor;
        }
        return BasisPair(label_, downsample_2d(a, factor), downsample_2d(b, factor), prior0_);
    }
    const auto& [a, b] = dists_1d();
    const std::size_t factor = (a.size() + max_cells - 1) / max_cells;
    return BasisPair(label_, coarsen(a, factor), coarsen(b, factor), prior0_);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        raise(ErrorCode::OutOfRange, "binary entropy argument " + std::to_string(p));
    }
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

LeakageResult exact_mutual_information(const BasisPair& pair) {
    const auto [m0, m1] = pair.masses();
    const double prior0 = pair.prior0();
    const double prior1 = pair.prior1();

    Accumulator acc;
    for (std::size_t i = 0; i < m0.size(); ++i) {
        const double q0 = prior0 * m0[i];
        const double q1 = prior1 * m1[i];
        const double s = q0 + q1;
        if (s <= 0.0) continue;
        acc.add(xlog2x_ratio(q0, s));
        acc.add(xlog2x_ratio(q1, s));
    }
    const double prior_entropy = binary_entropy(prior0);
    const double raw = prior_entropy + acc.total();

    LeakageResult out;
    out.method = Method::Exact;
    out.bits_per_pulse = std::max(raw, 0.0);
    out.diagnostics["raw"] = raw;
    out.diagnostics["prior_entropy"] = prior_entropy;
    return out;
}

LeakageResult leakage_eq8_literal(double r0, double prior) {
    if (!(r0 >= 0.0 && r0 <= 1.0)) {
        raise(ErrorCode::OutOfRange, "R0 must lie in [0, 1], got " + std::to_string(r0));
    }
    if (!(prior > 0.0 && prior < 1.0)) {
        raise(ErrorCode::OutOfRange, "prior must lie in (0, 1)");
    }
    // Four (source, bit) terms of (R0/4) log2(R0 / (4 prior)); zero when R0=0.
    const double raw = 1.0 + (r0 > 0.0 ? r0 * std::log2(r0 / (4.0 * prior)) : 0.0);
    LeakageResult out;
    out.method = Method::Eq8Literal;
    out.bits_per_pulse = std::max(raw, 0.0);
    out.diagnostics["raw"] = raw;
    out.diagnostics["r0"] = r0;
    out.diagnostics["negative_raw"] = raw < 0.0 ? 1.0 : 0.0;
    return out;
}

LeakageResult leakage_guessing(double r0) {
    if (!(r0 >= 0.0 && r0 <= 1.0)) {
        raise(ErrorCode::OutOfRange, "R0 must lie in [0, 1], got " + std::to_string(r0));
    }
    LeakageResult out;
    out.method = Method::Guessing;
    out.bits_per_pulse = 1.0 - binary_entropy(r0 / 2.0);
    out.diagnostics["raw"] = out.bits_per_pulse;
    out.diagnostics["r0"] = r0;
    out.diagnostics["p_wrong"] = r0 / 2.0;
    return out;
}

PolarizationLeakage polarization_leakage(const PolarizationErrors& errors) {
    if (!(errors.e_hv >= 0.0 && errors.e_hv <= 1.0 && errors.e_da >= 0.0 && errors.e_da <= 1.0)) {
        raise(ErrorCode::OutOfRange, "polarization errors must lie in [0, 1]");
    }
    const double delta = std::abs(errors.e_hv - errors.e_da);
    // Proportionality constant fixed at 1; reports carry it so the
    // convention stays auditable.
    return {delta, delta};
}

LeakageResult joint_leakage(std::span<const BasisPair> pairs, std::size_t cell_budget) {
    if (pairs.empty()) {
        raise(ErrorCode::MissingInput, "joint leakage needs at least one pair");
    }
    const double prior0 = pairs.front().prior0();
    std::size_t total_cells = 1;
    for (const auto& p : pairs) {
        if (std::abs(p.prior0() - prior0) > 1e-12) {
            raise(ErrorCode::OutOfRange, "joint leakage requires equal priors across pairs");
        }
        if (p.cell_count() > cell_budget / total_cells) {
            raise(ErrorCode::TooManyParameters,
                  "product grid exceeds the cell budget of " + std::to_string(cell_budget));
        }
        total_cells *= p.cell_count();
    }

    std::vector<BasisPair::Masses> masses;
    masses.reserve(pairs.size());
    for (const auto& p : pairs) masses.push_back(p.masses());

    // Walk the product observation space depth-first, carrying the partial
    // conditional probabilities of both source labels.
    Accumulator acc;
    auto descend = [&](auto&& self, std::size_t dim, double p0, double p1) -> void {
        if (dim == masses.size()) {
            const double q0 = prior0 * p0;
            const double q1 = (1.0 - prior0) * p1;
            const double s = q0 + q1;
            if (s <= 0.0) return;
            acc.add(xlog2x_ratio(q0, s));
            acc.add(xlog2x_ratio(q1, s));
            return;
        }
        const auto& m = masses[dim];
        for (std::size_t i = 0; i < m.m0.size(); ++i) {
            if (m.m0[i] == 0.0 && m.m1[i] == 0.0) continue;
            self(self, dim + 1, p0 * m.m0[i], p1 * m.m1[i]);
        }
    };
    descend(descend, 0, 1.0, 1.0);

    const double prior_entropy = binary_entropy(prior0);
    const double raw = prior_entropy + acc.total();
    LeakageResult out;
    out.method = Method::Exact;
    out.bits_per_pulse = std::max(raw, 0.0);
    out.diagnostics["raw"] = raw;
    out.diagnostics["cells"] = static_cast<double>(total_cells);
    out.diagnostics["parameters"] = static_cast<double>(pairs.size());
    return out;
}

double key_rate_bound(double i_ab, double i_ae, Direction direction, std::optional<double> i_be) {
    auto check = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) {
            raise(ErrorCode::OutOfRange,
                  std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
        }
    };
    check(i_ab, "I(A:B)");
    check(i_ae, "I(A:E)");
    if (direction == Direction::RR) {
        if (!i_be) {
            raise(ErrorCode::MissingInput, "reverse reconciliation requires I(B:E)");
        }
        check(*i_be, "I(B:E)");
        return i_ab - *i_be;
    }
    return i_ab - i_ae;
}

double qber_to_iab(double qber) {
    if (!(qber >= 0.0 && qber <= 0.5)) {
        raise(ErrorCode::OutOfRange, "QBER must lie in [0, 0.5], got " + std::to_string(qber));
    }
    return 1.0 - binary_entropy(qber);
}

BasisPair make_basis_pair(const SourceEnsemble& ensemble, const std::string& parameter,
                          Basis basis, double prior0) {
    const auto [p0, p1] = basis_diodes(basis);
    const auto& diode0 = ensemble.diode(p0);
    const auto& diode1 = ensemble.diode(p1);
    auto it0 = diode0.parameters.find(parameter);
    auto it1 = diode1.parameters.find(parameter);
    if (it0 == diode0.parameters.end() || it1 == diode1.parameters.end()) {
        raise(ErrorCode::MissingParameter,
              "parameter '" + parameter + "' is not recorded for basis " +
                  std::string(basis_name(basis)));
    }
    if (it0->second.index() != it1->second.index()) {
        raise(ErrorCode::GridMismatch,
              "parameter '" + parameter + "' mixes 1D and 2D records within a basis");
    }
    if (std::holds_alternative<SpatialMode2D>(it0->second)) {
        return BasisPair(basis, normalize(std::get<SpatialMode2D>(it0->second)),
                         normalize(std::get<SpatialMode2D>(it1->second)), prior0);
    }
    auto [a, b] = resample_common(std::get<SampledDistribution1D>(it0->second),
                                  std::get<SampledDistribution1D>(it1->second));
    return BasisPair(basis, std::move(a), std::move(b), prior0);
}

LeakageResult evaluate_pair(const BasisPair& pair, Method method, const ReportOptions& options) {
    const double r0 = pair.overlap();
    LeakageResult result;
    switch (method) {
        case Method::Exact:
            result = exact_mutual_information(pair);
            break;
        case Method::Eq8Literal:
            result = leakage_eq8_literal(r0, pair.prior0());
            break;
        case Method::Guessing:
            result = leakage_guessing(r0);
            break;
        case Method::MonteCarlo:
            result = mc_mutual_information(pair, options.mc_samples, options.mc_seed,
                                           options.mc_hist_bins);
            break;
    }
    result.diagnostics["r0"] = r0;
    return result;
}

BasisReport basis_report(const SourceEnsemble& ensemble, const std::string& parameter,
                         Method method, const ReportOptions& options) {
    BasisReport report;
    for (Basis basis : kAllBases) {
        BasisPair pair = make_basis_pair(ensemble, parameter, basis);
        ReportOptions local = options;
        // distinct deterministic substream per (parameter, basis)
        local.mc_seed = fnv1a(basis_name(basis), fnv1a(parameter, options.mc_seed));
        LeakageResult result = evaluate_pair(pair, method, local);
        report.max_bits_per_pulse = std::max(report.max_bits_per_pulse, result.bits_per_pulse);
        report.per_basis.emplace(basis, std::move(result));
    }
    return report;
}

}  // namespace sidechan
