#include "qhexa/coefficient.hpp"

#include "qhexa/errors.hpp"

namespace qhexa {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ConstructionError("empty rational literal");
  for (std::size_t k = 0; k < text.size(); ++k) {
    char c = text[k];
    bool ok = (c >= '0' && c <= '9') || c == '/' || (k == 0 && (c == '-' || c == '+'));
    if (!ok) throw ConstructionError("invalid rational literal '" + text + "'");
  }
  std::string body = text[0] == '+' ? text.substr(1) : text;
  Rational q;
  if (q.set_str(body, 10) != 0) throw ConstructionError("invalid rational literal '" + text + "'");
  if (sgn(q.get_den()) == 0) throw ConstructionError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(norm) == 0) throw ConsistencyError("division by zero Gaussian rational");
  Rational re = (re_ * o.re_ + im_ * o.im_) / norm;
  Rational im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

} // namespace qhexa
