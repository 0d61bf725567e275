#pragma once

#include <memory>
#include <string>

#include "ffinv/geometry.hpp"

namespace ffinv {

/// Scalar function of position parsed from text, e.g. "1 + x + y" or
/// "1 + 0.5*exp(-4*r^2)". Variables x, y, r; constants pi, e; functions sin,
/// cos, tan, exp, log, sqrt, abs, tanh; operators + - * / ^ with the usual
/// precedence (^ is right-associative). Throws ConfigError on syntax errors.
class Expression {
public:
    explicit Expression(std::string text);

    [[nodiscard]] double operator()(Vec2 p) const;
    [[nodiscard]] const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace ffinv
