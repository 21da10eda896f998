#pragma once

// JSON form of certificates. Field order is fixed so that dumps are byte-stable:
//
//   excursion: level, start, end, case, crossings, pivot, children, length, reversed
//   loop:      level, crossings, children, length, residue
//
// `start`/`end` are the normalized y values (start < end) on x = level - 1;
// `case` is "base", "case1" or "case2"; `pivot` is null unless case2.

#include <hitomezashi/decompose.hpp>

#include <json.hpp>

#include <hitomezashi/large_stack.hpp>

#include <string>

namespace hitomezashi {

using Json = nlohmann::ordered_json;

namespace detail {

// ordered_json keeps keys in a vector of pairs with const keys; growing it
// deep-copies every value, so objects holding subtrees get their slots up front.
inline Json object_with_capacity(std::size_t keys) {
    Json j = Json::object();
    j.get_ref<Json::object_t&>().reserve(keys);
    return j;
}

inline Json children_json(const std::vector<ExcursionCertificate>& children);

inline Json excursion_json(const ExcursionCertificate& c) {
    Json j = object_with_capacity(9);
    j["level"] = c.level;
    j["start"] = c.start_y;
    j["end"] = c.end_y;
    j["case"] = to_string(c.case_tag);
    j["crossings"] = c.crossings;
    j["pivot"] = c.pivot ? Json(*c.pivot) : Json(nullptr);
    j["children"] = children_json(c.children);
    j["length"] = c.length;
    j["reversed"] = c.reversed;
    return j;
}

inline Json children_json(const std::vector<ExcursionCertificate>& children) {
    Json out = Json::array();
    out.get_ref<Json::array_t&>().reserve(children.size());
    for (const auto& child : children) {
        out.push_back(excursion_json(child));
    }
    return out;
}

} // namespace detail

inline Json to_json(const ExcursionCertificate& c) {
    return detail::on_large_stack([&] { return detail::excursion_json(c); });
}

inline Json to_json(const LoopCertificate& c) {
    return detail::on_large_stack([&] {
        Json j = detail::object_with_capacity(5);
        j["level"] = c.level;
        j["crossings"] = c.crossings;
        j["children"] = detail::children_json(c.children);
        j["length"] = c.length;
        j["residue"] = c.residue();
        return j;
    });
}

namespace detail {

// Position in a certificate being read, spelled out only for error messages.
class JsonPath {
public:
    void push(std::size_t child) { trail_.push_back(child); }
    void pop() { trail_.pop_back(); }
    std::string str() const {
        std::string out = "loop";
        for (const std::size_t k : trail_) {
            out += ".children[" + std::to_string(k) + "]";
        }
        return out;
    }

private:
    std::vector<std::size_t> trail_;
};

template <typename J>
const J& field(const J& j, const char* key, const JsonPath& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(path.str() + ": missing field '" + key + "'");
    }
    return j.at(key);
}

template <typename T, typename J>
T number(const J& j, const char* key, const JsonPath& path) {
    const J& v = field(j, key, path);
    if constexpr (std::is_unsigned_v<T>) {
        // in-memory documents may hold non-negative values as signed integers
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.template get<std::int64_t>() >= 0)) {
            throw ParseError(path.str() + "." + key + ": expected a non-negative integer");
        }
    } else if (!v.is_number_integer()) {
        throw ParseError(path.str() + "." + key + ": expected an integer");
    }
    return v.template get<T>();
}

template <typename J>
std::vector<std::int64_t> crossings(const J& j, const JsonPath& path) {
    const J& v = field(j, "crossings", path);
    if (!v.is_array()) {
        throw ParseError(path.str() + ".crossings: expected an array");
    }
    std::vector<std::int64_t> out;
    out.reserve(v.size());
    for (const auto& y : v) {
        if (!y.is_number_integer()) {
            throw ParseError(path.str() + ".crossings: expected integers");
        }
        out.push_back(y.template get<std::int64_t>());
    }
    return out;
}

template <typename J>
std::vector<ExcursionCertificate> children(const J& j, JsonPath& path);

template <typename J>
ExcursionCertificate excursion_from_json(const J& j, JsonPath& path) {
    ExcursionCertificate c;
    c.level = number<std::int64_t>(j, "level", path);
    c.start_y = number<std::int64_t>(j, "start", path);
    c.end_y = number<std::int64_t>(j, "end", path);
    const J& tag = field(j, "case", path);
    if (tag == "base") {
        c.case_tag = CaseTag::Base;
    } else if (tag == "case1") {
        c.case_tag = CaseTag::Case1;
    } else if (tag == "case2") {
        c.case_tag = CaseTag::Case2;
    } else {
        throw ParseError(path.str() + ".case: unknown case " + tag.dump());
    }
    c.crossings = crossings(j, path);
    if (const J& pivot = field(j, "pivot", path); !pivot.is_null()) {
        c.pivot = number<std::size_t>(j, "pivot", path);
    }
    c.children = children(j, path);
    c.length = number<std::uint64_t>(j, "length", path);
    const J& rev = field(j, "reversed", path);
    if (!rev.is_boolean()) {
        throw ParseError(path.str() + ".reversed: expected a boolean");
    }
    c.reversed = rev.template get<bool>();
    return c;
}

template <typename J>
std::vector<ExcursionCertificate> children(const J& j, JsonPath& path) {
    const J& v = field(j, "children", path);
    if (!v.is_array()) {
        throw ParseError(path.str() + ".children: expected an array");
    }
    std::vector<ExcursionCertificate> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        path.push(k);
        out.push_back(excursion_from_json(v[k], path));
        path.pop();
    }
    return out;
}

template <typename J>
LoopCertificate loop_from_json(const J& j) {
    JsonPath path;
    LoopCertificate c;
    c.level = number<std::int64_t>(j, "level", path);
    c.crossings = crossings(j, path);
    c.children = children(j, path);
    c.length = number<std::uint64_t>(j, "length", path);
    if (number<std::int64_t>(j, "residue", path) != c.residue()) {
        throw ParseError("loop.residue: does not match length mod 8");
    }
    return c;
}

} // namespace detail

inline LoopCertificate loop_certificate_from_json(const Json& j) {
    return detail::on_large_stack([&] { return detail::loop_from_json(j); });
}

// One line: indenting a tree tens of thousands of levels deep would make the
// text quadratic in its depth.
inline std::string serialize(const LoopCertificate& c) {
    return detail::on_large_stack([&] { return to_json(c).dump() + "\n"; });
}

inline LoopCertificate parse_loop_certificate(const std::string& text) {
    // Map-backed objects here: see object_with_capacity.
    nlohmann::json j;
    try {
        j = detail::on_large_stack([&] { return nlohmann::json::parse(text); });
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    return detail::on_large_stack([&] { return detail::loop_from_json(j); });
}

} // namespace hitomezashi
