#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "owagen/calibrate.hpp"
#include "owagen/error.hpp"
#include "owagen/generate.hpp"
#include "owagen/json_io.hpp"
#include "owagen/metrics.hpp"

namespace owagen::service {

using nlohmann::json;

inline constexpr int kDefaultPort = 8080;
inline constexpr std::size_t kMinFrontierPoints = 2;
inline constexpr std::size_t kMaxFrontierPoints = 1001;
inline constexpr std::size_t kDefaultFrontierPoints = 201;

struct Reply {
    int status = 200;
    json body;
};

namespace detail {

/// Request fields that could be read, echoed back on every reply.
struct Echo {
    std::optional<double> alpha;
    std::optional<double> delta;
    std::optional<std::size_t> n;

    void apply(json& body) const {
        body["alpha"] = alpha ? json(*alpha) : json();
        body["delta"] = delta ? json(*delta) : json();
        body["n"] = n ? json(*n) : json();
    }
};

class BadRequest : public Error {
public:
    using Error::Error;
};

inline std::optional<double> number_field(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_number()) {
        return std::nullopt;
    }
    return it->get<double>();
}

inline std::optional<std::size_t> count_field(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end()) {
        return std::nullopt;
    }
    if (it->is_number_unsigned()) {
        return it->get<std::size_t>();
    }
    if (it->is_number_float()) {
        const double v = it->get<double>();
        if (v >= 0.0 && v == std::floor(v) && v < 1e15) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::nullopt;
}

inline json parse_object(std::string_view text) {
    json body = json::parse(text, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        throw BadRequest("request body must be a JSON object");
    }
    return body;
}

inline Echo read_echo(const json& body) {
    return {number_field(body, "alpha"), number_field(body, "delta"), count_field(body, "n")};
}

/// Validates α, δ, n and the optional ε; throws BadRequest naming the first bad field.
inline CalibrationConfig read_point(const json& body, const Echo& echo, DecisionPoint& point, std::size_t& n) {
    if (!echo.alpha || !(*echo.alpha >= 0.0 && *echo.alpha <= 1.0)) {
        throw BadRequest("alpha must be a number in [0,1]");
    }
    if (!echo.delta || !(*echo.delta >= 0.0 && *echo.delta <= 1.0)) {
        throw BadRequest("delta must be a number in [0,1]");
    }
    if (!echo.n || *echo.n < 1) {
        throw BadRequest("n must be an integer >= 1");
    }
    CalibrationConfig config;
    if (body.contains("epsilon")) {
        const auto eps = number_field(body, "epsilon");
        if (!eps || !(*eps > 0.0)) {
            throw BadRequest("epsilon must be a positive number");
        }
        config.epsilon = *eps;
    }
    point = {*echo.alpha, *echo.delta};
    n = *echo.n;
    return config;
}

inline Reply error_reply(int status, std::string_view code, std::string_view message, const Echo& echo) {
    json body{{"code", code}, {"message", message}};
    echo.apply(body);
    return {status, std::move(body)};
}

inline Reply infeasible_reply(const InfeasibleError& e, const Echo& echo) {
    json body = to_json(e, echo.n.value_or(0));
    echo.apply(body);
    return {422, std::move(body)};
}

/// Runs `handler`, mapping library failures onto status codes.
template <class Handler>
Reply guarded(std::string_view text, Handler&& handler) {
    Echo echo;
    try {
        const json body = parse_object(text);
        echo = read_echo(body);
        return handler(body, echo);
    } catch (const InfeasibleError& e) {
        return infeasible_reply(e, echo);
    } catch (const BadRequest& e) {
        return error_reply(400, "bad_request", e.what(), echo);
    } catch (const DimensionError& e) {
        return error_reply(400, "bad_request", e.what(), echo);
    } catch (const DomainError& e) {
        return error_reply(400, "bad_request", e.what(), echo);
    } catch (const std::exception& e) {
        return error_reply(500, "internal", e.what(), echo);
    }
}

}  // namespace detail

/// POST /api/weights {alpha, delta, n, epsilon?}
inline Reply weights(std::string_view request_body) {
    return detail::guarded(request_body, [](const json& body, const detail::Echo& echo) {
        DecisionPoint p;
        std::size_t n = 0;
        const CalibrationConfig config = detail::read_point(body, echo, p, n);
        return Reply{200, to_json(generate_weights(p, n, config))};
    });
}

/// POST /api/aggregate {alpha, delta, n, criteria:[...], epsilon?} -> {value, weights, sorted_criteria}
inline Reply aggregate(std::string_view request_body) {
    return detail::guarded(request_body, [](const json& body, const detail::Echo& echo) {
        DecisionPoint p;
        std::size_t n = 0;
        const CalibrationConfig config = detail::read_point(body, echo, p, n);
        const auto it = body.find("criteria");
        if (it == body.end() || !it->is_array()) {
            throw detail::BadRequest("criteria must be an array of numbers");
        }
        std::vector<double> criteria;
        for (const json& x : *it) {
            if (!x.is_number()) {
                throw detail::BadRequest("criteria must be an array of numbers");
            }
            criteria.push_back(x.get<double>());
        }
        if (criteria.size() != n) {
            throw detail::BadRequest("criteria has " + std::to_string(criteria.size()) + " entries but n is " +
                                     std::to_string(n));
        }
        const GenerationOutcome out = generate_weights(p, n, config);
        const CriteriaSet x(std::move(criteria));
        json reply{{"value", owa_aggregate(out.weights, x)},
                   {"weights", out.weights.to_vector()},
                   {"sorted_criteria", x.sorted()}};
        echo.apply(reply);
        return Reply{200, std::move(reply)};
    });
}

/// GET /api/frontier?points=K -> {alphas, delta_max}; K evenly spaced α in [0,1].
inline Reply frontier(std::optional<std::string_view> points) {
    std::size_t k = kDefaultFrontierPoints;
    if (points) {
        const std::string text(*points);
        std::size_t used = 0;
        long long parsed = -1;
        try {
            parsed = std::stoll(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() || parsed < static_cast<long long>(kMinFrontierPoints) ||
            parsed > static_cast<long long>(kMaxFrontierPoints)) {
            return {400,
                    {{"code", "bad_request"},
                     {"message", "points must be an integer in [2,1001]"},
                     {"alpha", nullptr},
                     {"delta", nullptr},
                     {"n", nullptr}}};
        }
        k = static_cast<std::size_t>(parsed);
    }
    std::vector<double> alphas(k);
    std::vector<double> dmax(k);
    for (std::size_t i = 0; i < k; ++i) {
        alphas[i] = static_cast<double>(i) / static_cast<double>(k - 1);
        dmax[i] = delta_max(alphas[i]);
    }
    return {200, {{"alphas", alphas}, {"delta_max", dmax}, {"points", k}, {"alpha", nullptr}, {"delta", nullptr},
                  {"n", nullptr}}};
}

inline void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
}

/// Registers the /api routes, and serves `static_dir` at / when it is nonempty.
/// Returns false if the static directory could not be mounted.
inline bool mount(httplib::Server& server, const std::string& static_dir = {}) {
    server.Post("/api/weights",
                [](const httplib::Request& req, httplib::Response& res) { send(res, weights(req.body)); });
    server.Post("/api/aggregate",
                [](const httplib::Request& req, httplib::Response& res) { send(res, aggregate(req.body)); });
    server.Get("/api/frontier", [](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string_view> points;
        std::string value;
        if (req.has_param("points")) {
            value = req.get_param_value("points");
            points = value;
        }
        send(res, frontier(points));
    });
    if (static_dir.empty()) {
        return true;
    }
    return server.set_mount_point("/", static_dir);
}

}  // namespace owagen::service
