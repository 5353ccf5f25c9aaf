#pragma once

#include <stdexcept>
#include <string>

namespace spl {

// Exit-code classes used by the CLI: parameter/domain problems map to 2,
// numerical resolution problems to 3.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : ParameterError {
  using ParameterError::ParameterError;
};
struct IndexError : ParameterError {
  using ParameterError::ParameterError;
};
struct SingularityError : ParameterError {
  using ParameterError::ParameterError;
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved(achieved) {}
  double achieved;  // best error estimate reached before giving up
};
struct ResolutionError : NumericalError {
  using NumericalError::NumericalError;
};
struct TruncationError : NumericalError {
  using NumericalError::NumericalError;
};
struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};
struct InternalError : NumericalError {
  using NumericalError::NumericalError;
};

struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
};

struct BesselOrder {
  double nu = 0.0;
};

enum class Variant { JacobiTrigPol, JacobiTrigFun, JacobiScaled, FBNatural, FBLebesgue };

struct SettingId {
  Variant variant = Variant::JacobiTrigPol;
  JacobiParams jp{};
  BesselOrder bo{};

  static SettingId jacobi_pol(double a, double b) { return {Variant::JacobiTrigPol, {a, b}, {}}; }
  static SettingId jacobi_fun(double a, double b) { return {Variant::JacobiTrigFun, {a, b}, {}}; }
  static SettingId jacobi_scaled(double a, double b) { return {Variant::JacobiScaled, {a, b}, {}}; }
  static SettingId fb_natural(double nu) { return {Variant::FBNatural, {}, {nu}}; }
  static SettingId fb_lebesgue(double nu) { return {Variant::FBLebesgue, {}, {nu}}; }

  bool is_jacobi() const {
    return variant == Variant::JacobiTrigPol || variant == Variant::JacobiTrigFun ||
           variant == Variant::JacobiScaled;
  }
  bool is_fb() const { return !is_jacobi(); }
  // settings whose reference measure is Lebesgue measure
  bool is_lebesgue() const {
    return variant == Variant::JacobiTrigFun || variant == Variant::JacobiScaled ||
           variant == Variant::FBLebesgue;
  }
  int origin() const { return is_jacobi() ? 0 : 1; }
  double length() const;  // right endpoint; left endpoint is always 0
  void validate() const;  // throws ParameterError
  std::string key() const;
  std::string describe() const;
};

Variant parse_variant(const std::string& key);
std::string variant_key(Variant v);

struct KernelValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// Interior check shared by everything that takes a point of the setting interval.
void require_interior(const SettingId& s, double x, const char* what);

constexpr double kPi = 3.14159265358979323846;

// short %g rendering for error messages
std::string fmt(double v);

}  // namespace spl
