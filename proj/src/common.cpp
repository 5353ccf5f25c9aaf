#include "spl/common.hpp"

#include <cmath>
#include <sstream>

namespace spl {

double SettingId::length() const {
  switch (variant) {
    case Variant::JacobiTrigPol:
    case Variant::JacobiTrigFun:
      return kPi;
    default:
      return 1.0;
  }
}

void SettingId::validate() const {
  if (is_jacobi()) {
    if (!(jp.alpha > -1.0) || !(jp.beta > -1.0) || !std::isfinite(jp.alpha) ||
        !std::isfinite(jp.beta))
      throw ParameterError("Jacobi parameters need alpha > -1 and beta > -1");
  } else {
    if (!(bo.nu > -1.0) || !std::isfinite(bo.nu))
      throw ParameterError("Bessel order needs nu > -1");
    if (bo.nu > 50.0) throw ParameterError("Bessel order above 50 is not supported");
  }
}

Variant parse_variant(const std::string& key) {
  if (key == "jacobi-pol") return Variant::JacobiTrigPol;
  if (key == "jacobi-fun") return Variant::JacobiTrigFun;
  if (key == "jacobi-scaled") return Variant::JacobiScaled;
  if (key == "fb-natural") return Variant::FBNatural;
  if (key == "fb-lebesgue") return Variant::FBLebesgue;
  throw ParameterError("unknown setting '" + key + "'");
}

std::string variant_key(Variant v) {
  switch (v) {
    case Variant::JacobiTrigPol: return "jacobi-pol";
    case Variant::JacobiTrigFun: return "jacobi-fun";
    case Variant::JacobiScaled: return "jacobi-scaled";
    case Variant::FBNatural: return "fb-natural";
    case Variant::FBLebesgue: return "fb-lebesgue";
  }
  return "?";
}

std::string SettingId::key() const { return variant_key(variant); }

std::string SettingId::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << key();
  if (is_jacobi())
    os << "(alpha=" << jp.alpha << ",beta=" << jp.beta << ")";
  else
    os << "(nu=" << bo.nu << ")";
  return os.str();
}

void require_interior(const SettingId& s, double x, const char* what) {
  if (!(x > 0.0 && x < s.length()))
    throw DomainError(std::string(what) + " must lie strictly inside the interval of " + s.key());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace spl
