#include "pairprobe/far_field_matrix.hpp"

#include <string>

#include "pairprobe/errors.hpp"

namespace pairprobe {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::background: return "background";
    case FieldKind::single_inclusion: return "single_inclusion";
    case FieldKind::double_inclusion: return "double_inclusion";
  }
  return "unknown";
}

FieldKind field_kind_from_string(std::string_view s) {
  if (s == "background") return FieldKind::background;
  if (s == "single_inclusion") return FieldKind::single_inclusion;
  if (s == "double_inclusion") return FieldKind::double_inclusion;
  throw ConfigError("unknown field kind '" + std::string(s) + "'");
}

}  // namespace pairprobe
