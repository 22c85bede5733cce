#include "pmblue/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pmblue/error.hpp"

namespace pmblue {

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
    constexpr std::uint64_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = m0 * c[0];
        const std::uint64_t p1 = m1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += w0;
        k[1] += w1;
    }
    return c;
}

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t replicate)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      rep_lo_(static_cast<std::uint32_t>(replicate)),
      rep_hi_(static_cast<std::uint32_t>(replicate >> 32)) {}

std::uint64_t DrawStream::bits(std::uint64_t k) const {
    const std::uint64_t block = k >> 1;
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), rep_lo_, rep_hi_}, key_);
    const std::size_t w = (k & 1) * 2;
    const std::uint64_t word = (static_cast<std::uint64_t>(out[w]) << 32) | out[w + 1];
    return word >> 11;
}

namespace {

// p in (0, 1/2): (v + 1/2) 2^-53 for the low 52 bits v.
double draw(const DistributionSpec& spec, std::uint64_t b) {
    const double p = std::ldexp(static_cast<double>(b & ((std::uint64_t{1} << 52) - 1)) + 0.5, -53);
    return (b >> 52) ? spec.isf(p) : spec.quantile(p);
}

}  // namespace

double DrawStream::sample(const DistributionSpec& spec, std::uint64_t k) const { return draw(spec, bits(k)); }

void Accumulator::add(double x, double target) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
    const double e = x - target;
    sq_error += e * e;
}

void Accumulator::merge(const Accumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
    const double n = na + nb;
    const double d = o.mean - mean;
    mean += d * nb / n;
    m2 += o.m2 + d * d * na * nb / n;
    sq_error += o.sq_error;
    count += o.count;
}

DistributionSpec simulation_family(const SimulationConfig& cfg) {
    DistributionSpec spec = parse_family(cfg.family);
    return cfg.reflected ? reflect(spec) : spec;
}

namespace {

void validate(const SimulationConfig& cfg, std::uint64_t min_replicates, int min_n) {
    if (!(cfg.theta2 > 0) || !std::isfinite(cfg.theta2)) throw ValidationError("theta2", "theta2 must be positive");
    if (!std::isfinite(cfg.theta1)) throw ValidationError("theta1", "theta1 must be finite");
    if (cfg.n < min_n) throw ValidationError("n", "n must be >= " + std::to_string(min_n));
    if (cfg.replicates < min_replicates)
        throw ValidationError("replicates", "replicates must be >= " + std::to_string(min_replicates));
}

Target target_of(EstimatorKind k) {
    return k == EstimatorKind::blue_location || k == EstimatorKind::blie_location ? Target::location : Target::scale;
}

const char* label_of(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::blue_location: return "L1";
        case EstimatorKind::blue_scale: return "L2";
        case EstimatorKind::blie_location: return "T1";
        case EstimatorKind::blie_scale: return "T2";
        case EstimatorKind::simple_scale: return "U2";
    }
    return "";
}

void fill(const DistributionSpec& spec, const SimulationConfig& cfg, std::uint64_t replicate, std::vector<double>& out) {
    const DrawStream s(cfg.seed, replicate);
    out.resize(static_cast<std::size_t>(cfg.n));
    const bool maxima = cfg.direction == Direction::maxima;
    for (int j = 0; j < cfg.n; ++j) {
        const double x = cfg.theta1 + cfg.theta2 * s.sample(spec, static_cast<std::uint64_t>(j));
        if (j == 0)
            out[0] = x;
        else
            out[j] = maxima ? std::max(out[j - 1], x) : std::min(out[j - 1], x);
    }
}

unsigned worker_count(unsigned requested, std::size_t chunks) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(chunks, 1)));
}

// Runs body(chunk) for every chunk on the workers; the first exception wins.
template <class Body>
void for_each_chunk(std::size_t chunks, unsigned workers, Body body) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = chunks;
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<PreparedEstimator> prepare_estimators(const DistributionSpec& spec, int n,
                                                  const std::vector<std::string>& labels, Direction direction,
                                                  const MomentOptions& opt) {
    if (labels.empty()) throw ValidationError("estimators", "no estimators requested");
    if (n < 2) throw ValidationError("n", "n must be >= 2");
    const DistributionSpec obs = direction == Direction::maxima ? spec : reflect(spec);
    std::optional<EstimatorPair> blue, blie;
    std::optional<PartialMaximaMoments> table;
    std::optional<SpacingMoments> sm;
    auto pm = [&]() -> const PartialMaximaMoments& {
        if (!table) table = pm_moments_table(obs, n, opt);
        return *table;
    };
    auto spacings = [&]() -> const SpacingMoments& {
        if (!sm) sm = spacing_moments(obs, n, opt);
        return *sm;
    };
    std::vector<PreparedEstimator> out;
    for (const std::string& label : labels) {
        const EstimatorKind kind = estimator_kind_from(label);
        PreparedEstimator p;
        p.label = label_of(kind);
        p.target = target_of(kind);
        switch (kind) {
            case EstimatorKind::blue_location:
                if (!blue) blue = solve_blue(pm());
                p.solution = blue->location;
                break;
            case EstimatorKind::blie_location:
                if (!blie) blie = solve_blie(pm());
                p.solution = blie->location;
                break;
            case EstimatorKind::blue_scale: p.solution = solve_blue_spacings(spacings()); break;
            case EstimatorKind::blie_scale: p.solution = solve_blie_spacings(spacings()); break;
            case EstimatorKind::simple_scale: p.solution = simple_scale_estimator(spacings()); break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<double> sample_partial_maxima(const SimulationConfig& cfg, const DistributionSpec& spec,
                                          std::uint64_t replicate) {
    validate(cfg, 1, 1);
    std::vector<double> v;
    fill(spec, cfg, replicate, v);
    return v;
}

MonteCarloReport run_simulation(const SimulationConfig& cfg, const std::vector<PreparedEstimator>& est) {
    validate(cfg, 100, 2);
    if (est.empty()) throw ValidationError("estimators", "no estimators requested");
    for (const auto& e : est) {
        if (e.solution.n != cfg.n)
            throw ValidationError("estimators", "estimator " + e.label + " was built for n = " +
                                                    std::to_string(e.solution.n) + ", config has n = " +
                                                    std::to_string(cfg.n));
    }
    const DistributionSpec spec = simulation_family(cfg);
    const std::size_t ne = est.size();
    const bool maxima = cfg.direction == Direction::maxima;
    std::vector<double> truth(ne);
    for (std::size_t e = 0; e < ne; ++e) truth[e] = est[e].target == Target::location ? cfg.theta1 : cfg.theta2;

    MonteCarloReport r;
    r.family = spec.identity();
    r.direction = cfg.direction;
    r.n = cfg.n;
    r.theta1 = cfg.theta1;
    r.theta2 = cfg.theta2;
    r.replicates = cfg.replicates;
    r.seed = cfg.seed;
    const std::uint64_t dump_rows = std::min({cfg.dump_rows, kMaxDumpRows, cfg.replicates});
    r.dump.assign(dump_rows, std::vector<double>(ne));

    const std::size_t chunks = (cfg.replicates + kReplicateChunk - 1) / kReplicateChunk;
    std::vector<std::vector<Accumulator>> acc(chunks, std::vector<Accumulator>(ne));
    for_each_chunk(chunks, worker_count(cfg.workers, chunks), [&](std::size_t c) {
        std::vector<double> x;
        const std::uint64_t begin = c * kReplicateChunk;
        const std::uint64_t end = std::min<std::uint64_t>(begin + kReplicateChunk, cfg.replicates);
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            fill(spec, cfg, rep, x);
            // Minima: -x holds the partial maxima of the reflected family with location -theta1.
            if (!maxima)
                for (double& v : x) v = -v;
            for (std::size_t e = 0; e < ne; ++e) {
                double t = evaluate(est[e].solution, x);
                if (!maxima && est[e].target == Target::location) t = -t;
                acc[c][e].add(t, truth[e]);
                if (rep < dump_rows) r.dump[rep][e] = t;
            }
        }
    });

    std::vector<Accumulator> total(ne);
    for (const auto& chunk : acc)
        for (std::size_t e = 0; e < ne; ++e) total[e].merge(chunk[e]);

    const double R = static_cast<double>(cfg.replicates);
    for (std::size_t e = 0; e < ne; ++e) {
        EstimatorStats s;
        s.label = est[e].label;
        s.true_value = truth[e];
        s.empirical_mean = total[e].mean;
        s.empirical_variance = total[e].variance();
        s.empirical_mse = total[e].sq_error / R;
        s.std_error_of_mean = std::sqrt(s.empirical_variance / R);
        s.theoretical_value = est[e].solution.variance * cfg.theta2 * cfg.theta2;
        s.z_score_bias = (s.empirical_mean - s.true_value) / s.std_error_of_mean;
        s.variance_ratio =
            (est[e].solution.is_blie() ? s.empirical_mse : s.empirical_variance) / s.theoretical_value;
        r.estimators.push_back(s);
    }
    return r;
}

MonteCarloReport run_simulation(const SimulationConfig& cfg) {
    validate(cfg, 100, 2);
    return run_simulation(cfg, prepare_estimators(simulation_family(cfg), cfg.n, cfg.estimators, cfg.direction));
}

RecordCountStats record_count_statistics(const SimulationConfig& cfg) {
    validate(cfg, 1, 1);
    const DistributionSpec spec = simulation_family(cfg);
    const std::size_t chunks = (cfg.replicates + kReplicateChunk - 1) / kReplicateChunk;
    std::vector<Accumulator> acc(chunks);
    for_each_chunk(chunks, worker_count(cfg.workers, chunks), [&](std::size_t c) {
        std::vector<double> x;
        const std::uint64_t begin = c * kReplicateChunk;
        const std::uint64_t end = std::min<std::uint64_t>(begin + kReplicateChunk, cfg.replicates);
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            fill(spec, cfg, rep, x);
            double distinct = 1;
            for (std::size_t j = 1; j < x.size(); ++j)
                if (x[j] != x[j - 1]) ++distinct;
            acc[c].add(distinct, 0.0);
        }
    });
    Accumulator total;
    for (const auto& a : acc) total.merge(a);
    RecordCountStats s;
    s.mean_distinct_values = total.mean;
    s.std_error = std::sqrt(total.variance() / static_cast<double>(total.count));
    long double h = 0;
    for (int k = cfg.n; k >= 1; --k) h += 1.0L / k;
    s.harmonic_reference = static_cast<double>(h);
    return s;
}

}  // namespace pmblue
