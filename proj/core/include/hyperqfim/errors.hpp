#pragma once

#include <stdexcept>
#include <string>

namespace hyperqfim {

enum class Errc {
    non_finite,
    dimension_mismatch,
    not_symmetric,
    not_psd,
    mode_mismatch,
    singular_denominator,
    unknown_channel,
    rank_deficient,
    closed_form_singular,
    domain_error,
    unknown_figure,
    bad_config,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace hyperqfim
