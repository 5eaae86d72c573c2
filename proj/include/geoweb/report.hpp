#pragma once

#include "geoweb/invariants.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace geoweb {

inline constexpr const char* kToolName = "geoweb";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip form is not required; reports use 17 significant digits.
std::string format_real(double v);

/// RFC-4180 field quoting (only when needed).
std::string csv_field(std::string_view text);

/// FNV-1a 64-bit digest, 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// "geodesic" / "not geodesic" / "inconclusive" and the linearizability analogue.
std::string geodesic_label(Verdict v);
std::string linearizable_label(Verdict v);

/// Process exit code for a verdict: 0 positive, 2 negative, 3 inconclusive.
int verdict_exit_code(Verdict v);

} // namespace geoweb
