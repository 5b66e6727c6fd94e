// SPDX-License-Identifier: Apache-2.0
//
// cfmimo - link-level simulator for uplink cell-free massive MIMO detection
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

namespace cfmimo {

void SweepSpec::validate() const
{
    config.validate();
    if (detectors.empty()) throw ConfigError("sweep: detector set is empty");
    if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (drops < 1) throw ConfigError("sweep: drops must be >= 1");
    if (workers < 1) throw ConfigError("sweep: workers must be >= 1");
    if (ratios.empty()) throw ConfigError("sweep: no pilot-to-user ratios");
    if (snrs_db.empty()) throw ConfigError("sweep: no SNR points");
    for (double r : ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("sweep: ratios must be positive");
        if (pilots_for_ratio(r, config.K) > config.tau_c) throw ConfigError("sweep: ratio needs more pilots than tau_c");
    }
    for (double s : snrs_db)
        if (!std::isfinite(s)) throw ConfigError("sweep: SNR values must be finite");
}

int pilots_for_ratio(double ratio, int K)
{
    const auto tau = static_cast<long long>(std::llround(ratio * K));
    return static_cast<int>(std::clamp<long long>(tau, 1, K));
}

TrialInput draw_trial(const Scenario& scenario, const SystemConfig& config, std::uint64_t drop,
                      std::uint64_t trial)
{
    auto fading_rng = make_stream(config.seed, drop, trial, Stream::SmallScale);
    auto assignment_rng = make_stream(config.seed, drop, trial, Stream::PilotAssignment);
    auto pilot_noise_rng = make_stream(config.seed, drop, trial, Stream::PilotNoise);
    auto bits_rng = make_stream(config.seed, drop, trial, Stream::DataBits);
    auto noise_rng = make_stream(config.seed, drop, trial, Stream::DataNoise);

    TrialInput in;
    in.pilots = assign_pilots(config.K, config.tau, assignment_rng, config.pilot_mode);
    const auto book = make_pilot_book(config.tau);
    in.channel = realize_channel(scenario.beta, in.pilots, book, config.p, config.sigma2, fading_rng, pilot_noise_rng);

    const Constellation c(config.M);
    in.bits.resize(static_cast<std::size_t>(config.K * c.bits_per_symbol()));
    std::bernoulli_distribution coin;
    for (auto& b : in.bits) b = coin(bits_rng) ? 1 : 0;
    in.x = modulate(in.bits, c);
    in.noise_var = config.sigma2 / config.p;
    in.y = received_data(in.channel.H, in.x, in.noise_var, noise_rng);
    return in;
}

TrialOutcome run_trial(const TrialInput& in, const SystemConfig& config, std::span<const Detector> detectors)
{
    const Constellation c(config.M);
    const EpParams ep{config.eta, config.T_max, config.eps_conv};
    const auto& ch = in.channel;
    TrialOutcome outcome;
    for (auto d : detectors) {
        DetectorOutcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            DetectionResult r;
            switch (d) {
            case Detector::MRC: r = detect_mrc(in.y, ch.Hhat, c); break;
            case Detector::MMSE: r = detect_mmse(in.y, ch.Hhat, ch.D, in.noise_var, c); break;
            case Detector::SIC: r = detect_mmse_sic(in.y, ch.Hhat, ch.D, in.noise_var, c); break;
            case Detector::EP: r = detect_ep(in.y, ch.Hhat, ch.D, in.noise_var, c, ep); break;
            case Detector::ML: r = detect_ml(in.y, ch.Hhat, ch.D, in.noise_var, c); break;
            }
            TrialMetrics m;
            m.bits = ber(r.hard_bits, in.bits);
            m.iterations = r.iterations;
            m.sinr = detector_sinr(r, ch.Hhat, ch.D, 1.0, in.noise_var);
            if (m.sinr.size() == 0) {
                m.sum_se = std::nan("");
            } else {
                m.sum_se = 0.0;
                for (Eigen::Index k = 0; k < m.sinr.size(); ++k) m.sum_se += se(m.sinr(k), config.tau, config.tau_c);
            }
            out.metrics = std::move(m);
        } catch (const DetectorAbort&) {
            out.metrics.reset();
        }
        out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        outcome[slot(d)] = std::move(out);
    }
    return outcome;
}

TrialOutcome run_trial(const Scenario& scenario, const SystemConfig& config, std::span<const Detector> detectors,
                       std::uint64_t drop, std::uint64_t trial)
{
    return run_trial(draw_trial(scenario, config, drop, trial), config, detectors);
}

const SweepRow* SweepResult::find(Detector d, double ratio, double snr_db) const
{
    for (const auto& row : rows)
        if (row.detector == d && std::abs(row.ratio - ratio) < 1e-12 && std::abs(row.snr_db - snr_db) < 1e-12)
            return &row;
    return nullptr;
}

double ber_ci95(std::int64_t errors, std::int64_t total)
{
    if (total <= 0) return 0.0;
    const double q = static_cast<double>(errors) / static_cast<double>(total);
    return 1.96 * std::sqrt(q * (1.0 - q) / static_cast<double>(total));
}

namespace {

void check_writable(const std::filesystem::path& path)
{
    if (path.empty()) return;
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream probe(path, std::ios::app);
    if (!probe) throw ConfigError("output path '" + path.string() + "' is not writable");
}

template <class Fn>
void parallel_for(int workers, std::int64_t count, Fn&& fn)
{
    if (workers <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    const auto n = std::min<std::int64_t>(workers, count);
    for (std::int64_t w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (std::int64_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, const ProgressFn& progress)
{
    spec.validate();
    check_writable(spec.output_path);

    std::vector<Scenario> drops;
    if (!spec.resample_drop_per_trial) {
        drops.resize(static_cast<std::size_t>(spec.drops));
        parallel_for(spec.workers, spec.drops, [&](std::int64_t d) {
            drops[static_cast<std::size_t>(d)] = make_scenario(spec.config, static_cast<std::uint64_t>(d));
        });
    }

    SweepResult result;
    const std::size_t total_cells = spec.ratios.size() * spec.snrs_db.size();
    std::size_t done_cells = 0;
    for (double ratio : spec.ratios) {
        for (double snr : spec.snrs_db) {
            SystemConfig cfg = spec.config;
            cfg.tau = pilots_for_ratio(ratio, cfg.K);
            cfg.set_snr_db(snr);

            std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
            parallel_for(spec.workers, spec.trials, [&](std::int64_t j) {
                const auto trial = static_cast<std::uint64_t>(j);
                if (spec.resample_drop_per_trial) {
                    const Scenario scenario = make_scenario(cfg, trial);
                    outcomes[static_cast<std::size_t>(j)] = run_trial(scenario, cfg, spec.detectors, trial, trial);
                } else {
                    const auto drop = trial % static_cast<std::uint64_t>(spec.drops);
                    outcomes[static_cast<std::size_t>(j)] =
                        run_trial(drops[static_cast<std::size_t>(drop)], cfg, spec.detectors, drop, trial);
                }
            });

            for (auto d : spec.detectors) {
                SweepRow row;
                row.detector = d;
                row.ratio = ratio;
                row.snr_db = snr;
                row.tau = cfg.tau;
                double se_sum = 0.0;
                double iter_sum = 0.0;
                for (const auto& outcome : outcomes) {
                    const auto& o = *outcome[slot(d)];
                    row.elapsed_s += o.elapsed_s;
                    if (!o.metrics) {
                        ++row.aborted;
                        continue;
                    }
                    ++row.trials;
                    row.bit_errors += o.metrics->bits.errors;
                    row.bits_total += o.metrics->bits.total;
                    se_sum += o.metrics->sum_se;
                    iter_sum += o.metrics->iterations;
                }
                const double n = static_cast<double>(std::max<std::int64_t>(row.trials, 1));
                row.ber = row.bits_total > 0 ? static_cast<double>(row.bit_errors) / static_cast<double>(row.bits_total)
                                             : 0.0;
                row.ber_ci95 = ber_ci95(row.bit_errors, row.bits_total);
                row.sum_se = se_sum / n;
                row.avg_iterations = iter_sum / n;
                result.rows.push_back(row);
            }
            if (progress) progress(++done_cells, total_cells);
        }
    }
    return result;
}

} // namespace cfmimo
