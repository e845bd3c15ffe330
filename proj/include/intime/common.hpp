#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace intime {

using Complex = std::complex<double>;

/// Error with a stable machine-readable code ("caustic", "tachyonic-frequency", ...)
/// alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Scientific notation with 12 significant digits; used for every CSV cell so
/// reruns are byte-identical.
std::string format_sci(double x);

/// "1.5,2.0,3.0" or "start:stop:count" -> vector of doubles.
std::vector<double> parse_number_list(const std::string& text);

} // namespace intime
