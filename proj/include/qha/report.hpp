#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qha/fock_core.hpp"
#include "qha/json_io.hpp"

namespace qha {

inline constexpr const char* kReportSchema = "qha-report/1";

struct RunConfig {
    TruncationSpec trunc;
    int quad_order = 96;      // Gauss-Laguerre
    int planar_order = 64;    // Gauss-Hermite per axis
    std::uint64_t seed = 7;

    Json to_json() const {
        return Json{{"dim", trunc.dim},
                    {"inner_dim", trunc.inner_dim},
                    {"radius", trunc.radius},
                    {"quad_order", quad_order},
                    {"planar_order", planar_order},
                    {"seed", seed}};
    }
};

struct Residual {
    std::string identity;
    Json params = Json::object();
    double residual = 0.0;
    double tolerance = 0.0;
    bool at_least = false;  // the quantity must reach the threshold instead of staying under it

    // NaN never passes.
    bool pass() const { return at_least ? residual >= tolerance : residual <= tolerance; }

    Json to_json() const {
        return Json{{"identity", identity},
                    {"params", params},
                    {"residual", residual},
                    {"tolerance", tolerance},
                    {"direction", at_least ? "ge" : "le"},
                    {"pass", pass()}};
    }
};

struct RunReport {
    std::vector<std::string> command;
    RunConfig config;
    Json results = Json::object();
    std::vector<Residual> residuals;
    Json error;  // null unless the run failed
    double wall_time_s = 0.0;

    bool pass() const {
        if (!error.is_null()) return false;
        for (const auto& r : residuals)
            if (!r.pass()) return false;
        return true;
    }

    Json to_json() const {
        Json rs = Json::array();
        for (const auto& r : residuals) rs.push_back(r.to_json());
        Json j{{"schema", kReportSchema},
               {"command", command},
               {"config", config.to_json()},
               {"results", results},
               {"residuals", std::move(rs)},
               {"pass", pass()},
               {"wall_time_s", wall_time_s}};
        if (!error.is_null()) j["error"] = error;
        return j;
    }
};

}  // namespace qha
