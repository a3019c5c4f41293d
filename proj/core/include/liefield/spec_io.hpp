#pragma once

#include <stdexcept>
#include <string>

#include "liefield/fields.hpp"
#include "liefield/model.hpp"

namespace liefield {

// Malformed spec or field document. where() is a JSON pointer into the document.
class SpecError : public std::runtime_error {
public:
    SpecError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

[[nodiscard]] ModelSpec parse_spec(const std::string& json_text);
[[nodiscard]] ModelSpec load_spec(const std::string& path);
[[nodiscard]] std::string spec_to_json(const ModelSpec& model, int indent = 2);
void save_spec(const ModelSpec& model, const std::string& path);

[[nodiscard]] FieldConfiguration parse_field(const std::string& json_text, const FibrationDims& expected);
[[nodiscard]] FieldConfiguration load_field(const std::string& path, const FibrationDims& expected);
[[nodiscard]] std::string field_to_json(const FibrationDims& d, const FieldConfiguration& field);
void save_field(const FibrationDims& d, const FieldConfiguration& field, const std::string& path);

}  // namespace liefield
