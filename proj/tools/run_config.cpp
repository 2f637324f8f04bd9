#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bellsim::cli {

namespace {

std::vector<double> split_numbers(const std::string& text, char sep) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
            ++used;
        }
        if (used != item.size() || !std::isfinite(v)) {
            throw std::invalid_argument("not a finite number: '" + item + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw std::invalid_argument("empty number list: '" + text + "'");
    }
    return values;
}

}  // namespace

std::vector<double> parse_angles_deg(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        const std::vector<double> parts = split_numbers(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("angle range needs start:stop:step: '" + text + "'");
        }
        const double start = parts[0], stop = parts[1], step = parts[2];
        if (step <= 0.0 || stop < start) {
            throw std::invalid_argument("angle range needs stop >= start and step > 0");
        }
        std::vector<double> grid;
        for (int i = 0;; ++i) {
            const double angle = start + step * i;
            if (angle > stop + step * 0.5) {
                break;
            }
            grid.push_back(angle);
        }
        return grid;
    }
    return split_numbers(text, ',');
}

ScheduleTimes parse_schedule_times(const std::string& text) {
    const std::vector<double> t = split_numbers(text, ',');
    if (t.size() != 5) {
        throw std::invalid_argument(
            "schedule times need 5 values (emit,choose_a,choose_b,measure_a,measure_b)");
    }
    return ScheduleTimes{t[0], t[1], t[2], t[3], t[4]};
}

ParticleKind parse_kind(const std::string& kind) {
    if (kind == "spin") {
        return ParticleKind::SpinHalf;
    }
    if (kind == "photon") {
        return ParticleKind::Photon;
    }
    throw std::invalid_argument("unknown kind '" + kind + "' (expected spin or photon)");
}

void load_config_file(const std::string& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("config file '" + path + "' must hold a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "model") {
                config.model = value.get<std::string>();
            } else if (key == "kind") {
                config.kind = value.get<std::string>();
            } else if (key == "n") {
                config.n = value.get<std::uint64_t>();
            } else if (key == "seed") {
                config.seed = value.get<std::uint64_t>();
            } else if (key == "angles") {
                config.angles = value.get<std::string>();
            } else if (key == "out") {
                config.out = value.get<std::string>();
            } else if (key == "plot") {
                config.plot = value.get<std::string>();
            } else if (key == "threads") {
                config.threads = value.get<int>();
            } else if (key == "analytic") {
                config.analytic = value.get<bool>();
            } else if (key == "schedule_l") {
                config.schedule_l = value.get<double>();
            } else if (key == "schedule_times") {
                config.schedule_times = value.get<std::string>();
            } else if (key == "allow_timelike") {
                config.allow_timelike = value.get<bool>();
            } else {
                throw std::invalid_argument("config file key '" + key + "' is not recognized");
            }
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config key '" + key + "' has the wrong type: " +
                                        e.what());
        }
    }
}

}  // namespace bellsim::cli
