#include "hypdisk/errors.hpp"

#include <json.hpp>

namespace hypdisk {

std::string format_error_json(const Error& e) {
  nlohmann::json j;
  j["error"] = e.name();
  j["message"] = e.what();
  if (auto* b = dynamic_cast<const BoundaryExceededError*>(&e)) {
    j["requested_radius"] = b->requested();
    j["max_radius"] = b->max_radius();
    j["blocking_psi"] = b->blocking_psi();
  }
  if (auto* f = dynamic_cast<const InconsistentFieldError*>(&e))
    j["residual"] = f->residual();
  return j.dump();
}

}  // namespace hypdisk
