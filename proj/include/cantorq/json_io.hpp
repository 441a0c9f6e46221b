#ifndef CANTORQ_JSON_IO_HPP
#define CANTORQ_JSON_IO_HPP

#include "cantorq/codebook.hpp"
#include "cantorq/rational.hpp"
#include "cantorq/word.hpp"

#include "json.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorq {

using Json = nlohmann::ordered_json;

/// {"num": "...", "den": "...", "approx": double}; approx is advisory.
inline Json rational_to_json(const Rational& q) {
    Json j;
    j["num"] = numerator_of(q).str();
    j["den"] = denominator_of(q).str();
    j["approx"] = to_double(q);
    return j;
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
inline Json bigint_to_json(const BigInt& v) {
    if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return Json(v.convert_to<std::uint64_t>());
    return Json(v.str());
}

inline Rational rational_from_json(const Json& j) {
    if (j.is_object()) {
        if (!j.contains("num") || !j.contains("den"))
            throw std::invalid_argument("rational object needs \"num\" and \"den\"");
        auto part = [](const Json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return v.dump();
            throw std::invalid_argument("rational num/den must be integer strings");
        };
        return parse_rational(part(j["num"]) + "/" + part(j["den"]));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
    // A JSON float has already lost its decimal text.
    throw std::invalid_argument("code points must be {\"num\",\"den\"} objects or strings, got " + j.dump());
}

inline Json words_to_json(const std::vector<Word>& words) {
    Json arr = Json::array();
    for (const Word& w : words) arr.push_back(w.str());
    return arr;
}

inline Json points_to_json(const std::vector<Rational>& pts) {
    Json arr = Json::array();
    for (const Rational& p : pts) arr.push_back(rational_to_json(p));
    return arr;
}

/// Accepts a bare array of rationals, or a `sets` envelope (its canonical codebook).
inline Codebook codebook_from_json(const Json& doc) {
    const Json* arr = &doc;
    if (doc.is_object()) {
        if (doc.contains("results") && doc["results"].contains("canonical") &&
            doc["results"]["canonical"].contains("codebook")) {
            arr = &doc["results"]["canonical"]["codebook"];
        } else if (doc.contains("codebook")) {
            arr = &doc["codebook"];
        } else {
            throw std::invalid_argument("codebook document has no codebook array");
        }
    }
    if (!arr->is_array() || arr->empty()) throw std::invalid_argument("codebook must be a non-empty JSON array");
    std::vector<Rational> pts;
    for (const Json& e : *arr) pts.push_back(rational_from_json(e));
    return Codebook::from_unsorted(std::move(pts));
}

inline Codebook parse_codebook(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("codebook is not valid JSON: ") + e.what());
    }
    return codebook_from_json(doc);
}

}  // namespace cantorq

#endif  // CANTORQ_JSON_IO_HPP
