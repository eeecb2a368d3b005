// Copyright 2026 The weakval authors
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

#include "weakval/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace weakval {

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {
    "experiment", "z",          "alpha",        "beta",
    "final_alpha", "final_beta", "epsilon1",     "epsilon2",
    "delta_t",     "coupling_mode", "epsilon_list", "n_shots",
    "seed",        "out",        "format",       "sweep",
};

const char* const kSweepAxes[] = {"z",       "epsilon1", "epsilon2",
                                  "delta_t", "n_shots",  "seed"};

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw Error(errc::validation_error, field + ": " + why);
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) bad_field(field, "expected a number");
    return v.get<double>();
}

std::uint64_t as_uint(const json& v, const std::string& field) {
    if (!v.is_number_unsigned()) {
        bad_field(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& field) {
    if (!v.is_string()) bad_field(field, "expected a string");
    return v.get<std::string>();
}

Amplitude as_complex(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
        bad_field(field, "expected [re, im]");
    }
    return Amplitude{v[0].get<double>(), v[1].get<double>()};
}

void check_epsilon_range(double eps, const std::string& field) {
    if (!(eps > 0.0) || !(eps < kHalfPi)) {
        bad_field(field, "must lie in (0, pi/2)");
    }
}

void forbid(const std::optional<double>& v, const char* field,
            const char* variant) {
    if (v) bad_field(field, std::string("not used by ") + variant);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ConfigValues parse_values(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(errc::parse_error, e.what());
    }
    if (!doc.is_object()) {
        throw Error(errc::parse_error, "config document must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        bool known = std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                                 [&](const char* k) { return key == k; });
        if (!known) bad_field(key, "unknown key");
        (void)value;
    }

    ConfigValues v;
    if (doc.contains("experiment")) v.experiment = as_string(doc["experiment"], "experiment");
    if (doc.contains("z")) v.z = as_number(doc["z"], "z");
    if (doc.contains("alpha")) v.alpha = as_complex(doc["alpha"], "alpha");
    if (doc.contains("beta")) v.beta = as_complex(doc["beta"], "beta");
    if (doc.contains("final_alpha")) v.final_alpha = as_complex(doc["final_alpha"], "final_alpha");
    if (doc.contains("final_beta")) v.final_beta = as_complex(doc["final_beta"], "final_beta");
    if (doc.contains("epsilon1")) v.epsilon1 = as_number(doc["epsilon1"], "epsilon1");
    if (doc.contains("epsilon2")) v.epsilon2 = as_number(doc["epsilon2"], "epsilon2");
    if (doc.contains("delta_t")) v.delta_t = as_number(doc["delta_t"], "delta_t");
    if (doc.contains("coupling_mode")) v.coupling_mode = as_string(doc["coupling_mode"], "coupling_mode");
    if (doc.contains("epsilon_list")) {
        if (!doc["epsilon_list"].is_array()) bad_field("epsilon_list", "expected an array");
        std::vector<double> list;
        for (const auto& e : doc["epsilon_list"]) list.push_back(as_number(e, "epsilon_list"));
        v.epsilon_list = std::move(list);
    }
    if (doc.contains("n_shots")) v.n_shots = as_uint(doc["n_shots"], "n_shots");
    if (doc.contains("seed")) v.seed = as_uint(doc["seed"], "seed");
    if (doc.contains("out")) v.out = as_string(doc["out"], "out");
    if (doc.contains("format")) v.format = as_string(doc["format"], "format");
    if (doc.contains("sweep")) {
        if (!doc["sweep"].is_object()) bad_field("sweep", "expected an object");
        for (const auto& [axis, values] : doc["sweep"].items()) {
            bool known = std::any_of(std::begin(kSweepAxes), std::end(kSweepAxes),
                                     [&](const char* k) { return axis == k; });
            if (!known) bad_field("sweep." + axis, "not a sweepable field");
            if (!values.is_array() || values.empty()) {
                bad_field("sweep." + axis, "expected a non-empty array");
            }
            std::vector<double> axis_values;
            for (const auto& e : values) axis_values.push_back(as_number(e, "sweep." + axis));
            v.sweep.emplace(axis, std::move(axis_values));
        }
    }
    return v;
}

RunConfig validate_config(const ConfigValues& v) {
    if (!v.experiment) bad_field("experiment", "required");
    std::optional<ExperimentVariant> variant = variant_from_string(*v.experiment);
    if (!variant) bad_field("experiment", "unknown variant '" + *v.experiment + "'");

    RunConfig config;
    config.spec.variant = *variant;

    // System block: z is the anomaly-pair shorthand and excludes explicit
    // state amplitudes.
    bool has_state = v.alpha || v.beta || v.final_alpha || v.final_beta;
    if (v.z && has_state) bad_field("z", "mutually exclusive with alpha/beta");
    if (v.z) {
        config.spec.system.z = *v.z;
    } else if (has_state) {
        if (!v.alpha || !v.beta) bad_field("alpha/beta", "both are required");
        try {
            config.spec.system.phi_i = prepare_system(*v.alpha, *v.beta);
        } catch (const Error& e) {
            bad_field("alpha/beta", e.what());
        }
        if (v.final_alpha || v.final_beta) {
            if (!v.final_alpha || !v.final_beta) {
                bad_field("final_alpha/final_beta", "both are required");
            }
            try {
                config.spec.system.phi_f = prepare_system(*v.final_alpha, *v.final_beta);
            } catch (const Error& e) {
                bad_field("final_alpha/final_beta", e.what());
            }
        }
    } else {
        bad_field("z", "either z or alpha/beta is required");
    }

    bool needs_final = *variant != ExperimentVariant::weak_no_postselect;
    if (needs_final && !v.z && !config.spec.system.phi_f) {
        bad_field("final_alpha/final_beta",
                  std::string("required for ") + to_string(*variant));
    }

    auto want_eps1 = *variant == ExperimentVariant::weak_no_postselect ||
                     *variant == ExperimentVariant::weak_postselect ||
                     *variant == ExperimentVariant::consistency_zz ||
                     *variant == ExperimentVariant::simultaneity_zx ||
                     *variant == ExperimentVariant::simultaneity_xz;
    auto want_eps2 = *variant == ExperimentVariant::consistency_zz ||
                     *variant == ExperimentVariant::simultaneity_zx ||
                     *variant == ExperimentVariant::simultaneity_xz;

    if (want_eps1) {
        if (!v.epsilon1) bad_field("epsilon1", std::string("required for ") + to_string(*variant));
        check_epsilon_range(*v.epsilon1, "epsilon1");
        config.spec.epsilon1 = *v.epsilon1;
    } else {
        forbid(v.epsilon1, "epsilon1", to_string(*variant));
    }
    if (want_eps2) {
        if (!v.epsilon2) bad_field("epsilon2", std::string("required for ") + to_string(*variant));
        check_epsilon_range(*v.epsilon2, "epsilon2");
        config.spec.epsilon2 = *v.epsilon2;
    } else {
        forbid(v.epsilon2, "epsilon2", to_string(*variant));
    }

    if (*variant == ExperimentVariant::dynamical_probe) {
        if (!v.delta_t) bad_field("delta_t", "required for dynamical_probe");
        if (!(*v.delta_t >= 0.0)) bad_field("delta_t", "must be >= 0");
        config.spec.delta_t = *v.delta_t;
        if (v.coupling_mode) {
            if (*v.coupling_mode == "exact") {
                config.spec.coupling_mode = CouplingMode::exact;
            } else if (*v.coupling_mode == "first_order") {
                config.spec.coupling_mode = CouplingMode::first_order;
            } else {
                bad_field("coupling_mode", "must be 'exact' or 'first_order'");
            }
        }
    } else {
        forbid(v.delta_t, "delta_t", to_string(*variant));
        if (v.coupling_mode) bad_field("coupling_mode", std::string("not used by ") + to_string(*variant));
    }

    if (*variant == ExperimentVariant::convergence_sweep) {
        if (!v.epsilon_list) bad_field("epsilon_list", "required for convergence_sweep");
        for (std::size_t k = 0; k < v.epsilon_list->size(); ++k) {
            check_epsilon_range((*v.epsilon_list)[k], "epsilon_list");
            if (k > 0 && (*v.epsilon_list)[k] >= (*v.epsilon_list)[k - 1]) {
                bad_field("epsilon_list", "entries must be strictly decreasing");
            }
        }
        config.spec.epsilon_list = *v.epsilon_list;
    } else if (v.epsilon_list) {
        bad_field("epsilon_list", std::string("not used by ") + to_string(*variant));
    }

    if (v.n_shots) {
        if (*v.n_shots < 1) bad_field("n_shots", "must be >= 1");
        config.spec.plan.n_shots = *v.n_shots;
    }
    if (v.seed) config.spec.plan.master_seed = *v.seed;

    if (v.out) config.out_path = *v.out;
    if (v.format) {
        if (*v.format == "csv") config.format = OutputFormat::csv;
        else if (*v.format == "jsonl") config.format = OutputFormat::jsonl;
        else bad_field("format", "must be 'csv' or 'jsonl'");
    }
    return config;
}

RunConfig parse_config(const std::string& text) {
    return validate_config(parse_values(text));
}

std::vector<RunConfig> expand_sweep(const ConfigValues& values) {
    std::vector<ConfigValues> grid{values};
    for (const char* axis : kSweepAxes) {
        auto it = values.sweep.find(axis);
        if (it == values.sweep.end()) continue;
        std::vector<ConfigValues> next;
        next.reserve(grid.size() * it->second.size());
        for (const ConfigValues& base : grid) {
            for (double value : it->second) {
                ConfigValues point = base;
                std::string name = axis;
                if (name == "z") point.z = value;
                else if (name == "epsilon1") point.epsilon1 = value;
                else if (name == "epsilon2") point.epsilon2 = value;
                else if (name == "delta_t") point.delta_t = value;
                else if (name == "n_shots") {
                    if (value < 1 || value != std::floor(value)) {
                        bad_field("sweep.n_shots", "values must be positive integers");
                    }
                    point.n_shots = static_cast<std::uint64_t>(value);
                } else if (name == "seed") {
                    if (value < 0 || value != std::floor(value)) {
                        bad_field("sweep.seed", "values must be non-negative integers");
                    }
                    point.seed = static_cast<std::uint64_t>(value);
                }
                next.push_back(std::move(point));
            }
        }
        grid = std::move(next);
    }
    std::vector<RunConfig> configs;
    configs.reserve(grid.size());
    for (ConfigValues& point : grid) {
        point.sweep.clear();
        configs.push_back(validate_config(point));
    }
    return configs;
}

std::string effective_config_json(const ConfigValues& v) {
    // Hand-rolled so floating point fields keep the 17-digit round-trip
    // format used everywhere else.
    std::string out = "{";
    bool first = true;
    auto emit = [&](const std::string& key, const std::string& raw, bool quote) {
        if (!first) out += ",";
        first = false;
        out += "\"" + key + "\":";
        out += quote ? "\"" + raw + "\"" : raw;
    };
    auto emit_complex = [&](const std::string& key, const Amplitude& a) {
        emit(key, "[" + fmt17(a.real()) + "," + fmt17(a.imag()) + "]", false);
    };
    if (v.experiment) emit("experiment", *v.experiment, true);
    if (v.z) emit("z", fmt17(*v.z), false);
    if (v.alpha) emit_complex("alpha", *v.alpha);
    if (v.beta) emit_complex("beta", *v.beta);
    if (v.final_alpha) emit_complex("final_alpha", *v.final_alpha);
    if (v.final_beta) emit_complex("final_beta", *v.final_beta);
    if (v.epsilon1) emit("epsilon1", fmt17(*v.epsilon1), false);
    if (v.epsilon2) emit("epsilon2", fmt17(*v.epsilon2), false);
    if (v.delta_t) emit("delta_t", fmt17(*v.delta_t), false);
    if (v.coupling_mode) emit("coupling_mode", *v.coupling_mode, true);
    if (v.epsilon_list) {
        std::string list = "[";
        for (std::size_t k = 0; k < v.epsilon_list->size(); ++k) {
            if (k > 0) list += ",";
            list += fmt17((*v.epsilon_list)[k]);
        }
        emit("epsilon_list", list + "]", false);
    }
    if (v.n_shots) emit("n_shots", std::to_string(*v.n_shots), false);
    if (v.seed) emit("seed", std::to_string(*v.seed), false);
    if (v.out) emit("out", *v.out, true);
    if (v.format) emit("format", *v.format, true);
    return out + "}";
}

} // namespace weakval
