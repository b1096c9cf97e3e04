#include "csd/simgen.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>

#include "csd/dataio.hpp"
#include "csd/error.hpp"
#include "csd/parallel.hpp"

namespace csd {

Scenario parse_scenario(const std::string& name) {
    std::string s = name;
    if (s.size() == 3 && s[1] == '-') s.erase(1, 1);
    if (s.size() == 2 && (s[0] == 'S' || s[0] == 's') && s[1] >= '1' && s[1] <= '6')
        return static_cast<Scenario>(s[1] - '1');
    throw ParameterError("unknown scenario '" + name + "' (expected S1..S6)");
}

std::string scenario_name(Scenario s) { return "S" + std::to_string(static_cast<int>(s) + 1); }

void ScenarioConfig::validate() const {
    if (samples < 2) throw ParameterError("scenario needs at least 2 samples");
    if (communities < 1) throw ParameterError("scenario needs at least 1 community");
    if ((scenario == Scenario::S3 || scenario == Scenario::S6) && communities < 2)
        throw ParameterError(scenario_name(scenario) + " needs at least 2 communities");
    if (size_choices.empty()) throw ParameterError("community size choices are empty");
    for (std::size_t s : size_choices)
        if (s < 2) throw ParameterError("community sizes must be at least 2");
    if (replicates < 1) throw ParameterError("replicate count must be at least 1");
}

double follower_correlation(std::size_t j, std::size_t community_size, CorrelationRange range) {
    return range.r_min +
           (range.r_max - range.r_min) * (1.0 - static_cast<double>(j) / static_cast<double>(community_size));
}

namespace {

void check_range(CorrelationRange range) {
    if (!(range.r_min > 0.0)) throw ParameterError("r_min must be positive");
    if (!(range.r_min <= range.r_max && range.r_max <= 1.0))
        throw ParameterError("correlation range needs r_min <= r_max <= 1");
}

} // namespace

Community generate_community(std::size_t samples, std::size_t size, CorrelationRange range, Rng& rng,
                             const std::vector<double>* leader) {
    check_range(range);
    if (size < 2) throw ParameterError("community size must be at least 2");
    if (leader && leader->size() != samples) throw ParameterError("leader profile length differs from sample count");

    Community c{ExpressionMatrix(samples, size), 0};
    double* hub = c.profiles.column(0);
    for (std::size_t i = 0; i < samples; ++i) hub[i] = leader ? (*leader)[i] : rng.normal();
    for (std::size_t j = 2; j <= size; ++j) {
        const double r = follower_correlation(j, size, range);
        const double scale = std::sqrt(1.0 / (r * r) - 1.0);
        double* col = c.profiles.column(j - 1);
        for (std::size_t i = 0; i < samples; ++i) col[i] = hub[i] + scale * rng.normal();
    }
    return c;
}

std::vector<double> correlated_profile(const std::vector<double>& base, double r, Rng& rng) {
    if (!(r > 0.0 && r <= 1.0)) throw ParameterError("profile correlation must lie in (0,1]");
    // r * (base + sqrt(1/r^2 - 1) eps): the follower construction rescaled to unit variance.
    const double noise = std::sqrt(1.0 - r * r);
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = r * base[i] + noise * rng.normal();
    return out;
}

std::size_t LabeledDataset::relevant_count() const {
    std::size_t n = 0;
    for (Label l : labels) n += l != kUnclustered;
    return n;
}

namespace {

constexpr std::uint64_t kIrrelevantStream = 1000;
constexpr std::uint64_t kNoiseStream = 2000;

std::vector<std::string> variable_names(std::size_t count) {
    const std::size_t width = std::max<std::size_t>(4, std::to_string(count).size());
    std::vector<std::string> ids(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::string digits = std::to_string(i + 1);
        ids[i] = "g" + std::string(width - digits.size(), '0') + digits;
    }
    return ids;
}

template <typename T>
const T& pick(const std::vector<T>& choices, Rng& rng) {
    return choices[rng.below(choices.size())];
}

} // namespace

LabeledDataset generate_scenario(const ScenarioConfig& config, std::size_t replicate) {
    config.validate();
    const Scenario sc = config.scenario;
    const std::size_t k_count = config.communities;
    Rng stream(derive_seed(config.seed, {replicate}));

    std::vector<std::size_t> sizes(k_count);
    for (auto& s : sizes) s = pick(config.size_choices, stream);

    LabeledDataset data;
    data.ranges.assign(k_count, kDenseCommunity);
    if (sc == Scenario::S2 || sc == Scenario::S6) {
        const std::vector<CorrelationRange> configs{kDenseCommunity, kSparseCommunity};
        for (auto& r : data.ranges) r = pick(configs, stream);
    }
    if (sc == Scenario::S3) data.leader_correlation = 0.8;
    if (sc == Scenario::S6) data.leader_correlation = pick(std::vector<double>{0.2, 0.4, 0.6}, stream);
    if (sc == Scenario::S4) data.noise_sd = 1.0;
    if (sc == Scenario::S6) data.noise_sd = pick(std::vector<double>{0.1, 0.5, 1.0}, stream);

    ExpressionMatrix x(config.samples, 0);
    std::vector<double> first_leader;
    for (std::size_t k = 0; k < k_count; ++k) {
        Rng rng(derive_seed(config.seed, {replicate, 1 + k}));
        std::vector<double> leader;
        const bool paired = k == 1 && data.leader_correlation > 0.0;
        if (paired) leader = correlated_profile(first_leader, data.leader_correlation, rng);
        Community c = generate_community(config.samples, sizes[k], data.ranges[k], rng, paired ? &leader : nullptr);
        if (k == 0) first_leader.assign(c.profiles.column(0), c.profiles.column(0) + config.samples);
        data.hubs.push_back(x.variables());
        data.labels.insert(data.labels.end(), sizes[k], static_cast<Label>(k + 1));
        x.append_variables(c.profiles);
    }

    if (sc == Scenario::S4 || sc == Scenario::S6) {
        x = standardize(x);
        Rng rng(derive_seed(config.seed, {replicate, kNoiseStream}));
        for (std::size_t v = 0; v < x.variables(); ++v) {
            double* col = x.column(v);
            for (std::size_t i = 0; i < x.samples(); ++i) col[i] += data.noise_sd * rng.normal();
        }
    }

    if (sc == Scenario::S5 || sc == Scenario::S6) {
        const std::size_t p = x.variables();
        ExpressionMatrix irrelevant(config.samples, p);
        Rng rng(derive_seed(config.seed, {replicate, kIrrelevantStream}));
        for (std::size_t v = 0; v < p; ++v) {
            double* col = irrelevant.column(v);
            for (std::size_t i = 0; i < config.samples; ++i) col[i] = rng.normal();
        }
        x.append_variables(irrelevant);
        data.labels.insert(data.labels.end(), p, kUnclustered);
    }

    x.set_variable_ids(variable_names(x.variables()));
    data.x = std::move(x);
    return data;
}

std::vector<LabeledDataset> replicate_suite(const ScenarioConfig& config, std::size_t jobs) {
    config.validate();
    std::vector<LabeledDataset> out(config.replicates);
    parallel_for(config.replicates, jobs, [&](std::size_t r) { out[r] = generate_scenario(config, r); });
    return out;
}

std::string format_labels(const LabeledDataset& data) {
    std::vector<bool> hub(data.labels.size(), false);
    for (std::size_t h : data.hubs) hub[h] = true;
    std::ostringstream out;
    out << "variable_id\tcommunity_id\tis_hub\n";
    for (std::size_t v = 0; v < data.labels.size(); ++v)
        out << data.x.variable_ids()[v] << '\t' << data.labels[v] << '\t' << (hub[v] ? 1 : 0) << '\n';
    return out.str();
}

} // namespace csd
