#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace iwr {

enum class CheckStatus { pass, fail, skipped };

inline const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "skipped";
    }
}

struct CheckRecord {
    std::string check_id;
    std::string anchor;  // the published statement being checked
    CheckStatus status = CheckStatus::skipped;
    std::string computed;
    std::string expected;
    std::string tolerance_kind;  // exact | up-to-unit | valuation
    int criterion = 0;           // acceptance criterion, 0 when supplementary

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["check_id"] = check_id;
        j["anchor"] = anchor;
        j["status"] = status_name(status);
        j["computed"] = computed;
        j["expected"] = expected;
        j["tolerance_kind"] = tolerance_kind;
        if (criterion) j["criterion"] = criterion;
        return j;
    }
};

inline const char* kScopeStatement =
    "The Rankin-Selberg side is represented by the product of the two branch series; the convolution measure, "
    "period ratios and Selmer characteristic ideals are not computed.";

struct VerificationReport {
    std::string subject;
    std::string scope = kScopeStatement;
    std::vector<CheckRecord> records;
    std::vector<nlohmann::ordered_json> details;  // per-branch and auxiliary objects

    CheckRecord& add(std::string id, std::string anchor, bool ok, std::string computed, std::string expected,
                     std::string tolerance, int criterion = 0) {
        records.push_back({std::move(id), std::move(anchor), ok ? CheckStatus::pass : CheckStatus::fail,
                           std::move(computed), std::move(expected), std::move(tolerance), criterion});
        return records.back();
    }

    CheckRecord& add_failure(std::string id, std::string anchor, std::string error, int criterion = 0) {
        return add(std::move(id), std::move(anchor), false, "error: " + std::move(error), "", "exact", criterion);
    }

    bool passed() const {
        for (auto& r : records)
            if (r.status != CheckStatus::pass) return false;
        return true;
    }

    // One JSON object per line: header, details, then check records.
    std::string to_jsonl() const {
        std::string out;
        nlohmann::ordered_json head;
        head["report"] = subject;
        head["scope"] = scope;
        out += head.dump() + "\n";
        for (auto& d : details) out += d.dump() + "\n";
        for (auto& r : records) out += r.to_json().dump() + "\n";
        return out;
    }
};

}  // namespace iwr
