#include "ghflat/profile.hpp"

#include <sstream>

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace ghflat {

using nlohmann::json;

ExprProfile::ExprProfile(ProfileExpr expr, double lo, double hi)
    : expr_(std::move(expr)), lo_(lo), hi_(hi) {
  d1_ = differentiate(expr_, 1);
  d2_ = differentiate(expr_, 2);
  // Domain validation: divisions and square roots must stay defined on the
  // declared interval. Infinities at endpoints are legal (integrable flares);
  // NaN anywhere is a mis-declared domain.
  if (hi_ > lo_) {
    for (int k = 1; k < 64; ++k) {
      const double r = lo_ + (hi_ - lo_) * k / 64.0;
      if (std::isnan(expr_.eval(r)))
        throw PiecewiseError("expression '" + expr_.source_text +
                             "' is undefined inside its declared domain at r=" +
                             std::to_string(r));
    }
  }
}

double ExprProfile::value(double r) const { return expr_.eval(r); }
double ExprProfile::deriv1(double r) const { return d1_.eval(r); }
double ExprProfile::deriv2(double r) const { return d2_.eval(r); }

ProfilePtr constant_profile(double c, double lo, double hi) {
  ProfileExpr e{make_const(c), ""};
  std::ostringstream os;
  os.precision(17);
  os << c;
  e.source_text = os.str();
  return std::make_shared<ExprProfile>(std::move(e), lo, hi);
}

namespace {

// Quintic Hermite basis on [0,1]: H matches (value, d1, d2) at both ends.
void quintic_coeffs(double v0, double d0, double s0, double v1, double d1, double s1, double w,
                    double out[6]) {
  // f(u) = c0 + c1 u + c2 u^2 + c3 u^3 + c4 u^4 + c5 u^5 with endpoint data
  // scaled by the window width w (d in units of df/dr).
  const double D0 = d0 * w, D1 = d1 * w;
  const double S0 = s0 * w * w, S1 = s1 * w * w;
  out[0] = v0;
  out[1] = D0;
  out[2] = 0.5 * S0;
  out[3] = -10.0 * v0 - 6.0 * D0 - 1.5 * S0 + 10.0 * v1 - 4.0 * D1 + 0.5 * S1;
  out[4] = 15.0 * v0 + 8.0 * D0 + 1.5 * S0 - 15.0 * v1 + 7.0 * D1 - S1;
  out[5] = -6.0 * v0 - 3.0 * D0 - 0.5 * S0 + 6.0 * v1 - 3.0 * D1 + 0.5 * S1;
}

// Cubic Hermite with Fritsch-Carlson slope limiting against the secant.
void monotone_cubic_coeffs(double v0, double d0, double v1, double d1, double w, double out[6]) {
  const double secant = (v1 - v0) / w;
  double D0 = d0, D1 = d1;
  if (secant == 0.0) {
    D0 = D1 = 0.0;
  } else {
    if (D0 * secant < 0.0) D0 = 0.0;
    if (D1 * secant < 0.0) D1 = 0.0;
    if (std::abs(D0) > 3.0 * std::abs(secant)) D0 = 3.0 * secant;
    if (std::abs(D1) > 3.0 * std::abs(secant)) D1 = 3.0 * secant;
  }
  const double A0 = D0 * w, A1 = D1 * w;
  out[0] = v0;
  out[1] = A0;
  out[2] = 3.0 * (v1 - v0) - 2.0 * A0 - A1;
  out[3] = 2.0 * (v0 - v1) + A0 + A1;
  out[4] = out[5] = 0.0;
}

}  // namespace

double PiecewiseProfile::BlendPoly::eval(double r, int deriv) const {
  const double w = b - a;
  const double u = (r - a) / w;
  double acc = 0.0;
  switch (deriv) {
    case 0:
      for (int k = 5; k >= 0; --k) acc = acc * u + coeff[k];
      return acc;
    case 1:
      for (int k = 5; k >= 1; --k) acc = acc * u + k * coeff[k];
      return acc / w;
    default:
      for (int k = 5; k >= 2; --k) acc = acc * u + k * (k - 1) * coeff[k];
      return acc / (w * w);
  }
}

PiecewiseProfile::PiecewiseProfile(std::vector<Piece> pieces, std::vector<BlendSpec> blends)
    : pieces_(std::move(pieces)), blends_(std::move(blends)) {
  if (pieces_.empty()) throw PiecewiseError("piecewise profile needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& x, const Piece& y) { return x.from < y.from; });
  std::sort(blends_.begin(), blends_.end(), [](const BlendSpec& x, const BlendSpec& y) { return x.at < y.at; });
  lo_ = pieces_.front().from;
  hi_ = pieces_.back().to;
  for (const auto& p : pieces_)
    if (!(p.from < p.to)) throw PiecewiseError("piece interval is empty or reversed");

  const double join_tol = 1e-12 * std::max(1.0, std::abs(hi_ - lo_));

  // Pair junctions/gaps with blends.
  std::size_t bi = 0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const Piece& L = pieces_[i];
    const Piece& R = pieces_[i + 1];
    const double gap = R.from - L.to;
    if (gap < -join_tol) throw PiecewiseError("pieces overlap near r=" + std::to_string(L.to));

    const BlendSpec* spec = nullptr;
    if (bi < blends_.size() && blends_[bi].at <= R.from + blends_[bi].halfwidth + join_tol) {
      spec = &blends_[bi];
      ++bi;
    }

    if (!spec || spec->kind == BlendKind::exact_match) {
      if (gap > join_tol)
        throw PiecewiseError("gap in tiling at [" + std::to_string(L.to) + ", " +
                             std::to_string(R.from) + "] without a blend");
      // Evaluate a hair inside each piece: closed forms like the spline bump
      // only have one-sided limits at their interval ends. Steep pieces drift
      // by slope * inset across the probe points, so widen the tolerance by
      // that much.
      const double inset_l = 1e-9 * (L.to - L.from);
      const double inset_r = 1e-9 * (R.to - R.from);
      const double vl = L.profile->value(L.to - inset_l);
      const double vr = R.profile->value(R.from + inset_r);
      double drift = 0.0;
      const double dl = L.profile->deriv1(L.to - inset_l);
      const double dr = R.profile->deriv1(R.from + inset_r);
      if (std::isfinite(dl)) drift += std::abs(dl) * inset_l;
      if (std::isfinite(dr)) drift += std::abs(dr) * inset_r;
      if (std::abs(vl - vr) > kC0Tol + 2.0 * drift)
        throw PiecewiseError("discontinuity " + std::to_string(vl - vr) + " at r=" +
                             std::to_string(L.to) + " beyond tolerance without a blend");
      continue;
    }

    BlendPoly poly;
    poly.kind = spec->kind;
    poly.a = spec->at - spec->halfwidth;
    poly.b = spec->at + spec->halfwidth;
    poly.left_piece = static_cast<int>(i);
    poly.right_piece = static_cast<int>(i + 1);
    if (poly.a < L.from - join_tol || poly.b > R.to + join_tol)
      throw PiecewiseError("blend window exceeds adjacent pieces");
    if (gap > join_tol && (poly.a > L.to + join_tol || poly.b < R.from - join_tol))
      throw PiecewiseError("blend window does not cover the gap between pieces");

    const double w = poly.b - poly.a;
    const double v0 = L.profile->value(poly.a), v1 = R.profile->value(poly.b);
    const double d0 = L.profile->deriv1(poly.a), d1 = R.profile->deriv1(poly.b);
    if (spec->kind == BlendKind::quintic) {
      const double s0 = L.profile->deriv2(poly.a), s1 = R.profile->deriv2(poly.b);
      quintic_coeffs(v0, d0, s0, v1, d1, s1, w, poly.coeff);
    } else {
      monotone_cubic_coeffs(v0, d0, v1, d1, w, poly.coeff);
      // C1 demanded: the limited slopes must still match the pieces.
      if (std::abs(poly.eval(poly.a, 1) - d0) > kC1Tol || std::abs(poly.eval(poly.b, 1) - d1) > kC1Tol)
        throw PiecewiseError("monotone blend cannot match endpoint derivatives within tolerance");
    }
    polys_.push_back(poly);
  }
  if (bi < blends_.size()) throw PiecewiseError("blend spec does not match any junction");

  // C0/C1 across blend windows by construction; verify to catch bad inputs.
  for (const auto& poly : polys_) {
    const Piece& L = pieces_[poly.left_piece];
    const Piece& R = pieces_[poly.right_piece];
    if (std::abs(poly.eval(poly.a, 0) - L.profile->value(poly.a)) > kC0Tol ||
        std::abs(poly.eval(poly.b, 0) - R.profile->value(poly.b)) > kC0Tol)
      throw PiecewiseError("blend fails C0 continuity");
  }
}

int PiecewiseProfile::piece_index(double r) const {
  // Right piece wins at shared breakpoints.
  int idx = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (r >= pieces_[i].from) idx = static_cast<int>(i);
  }
  return idx;
}

const PiecewiseProfile::BlendPoly* PiecewiseProfile::blend_at(double r) const {
  for (const auto& poly : polys_)
    if (r >= poly.a && r < poly.b) return &poly;
  return nullptr;
}

double PiecewiseProfile::value(double r) const {
  if (const BlendPoly* poly = blend_at(r)) return poly->eval(r, 0);
  return pieces_[piece_index(r)].profile->value(r);
}

double PiecewiseProfile::deriv1(double r) const {
  if (const BlendPoly* poly = blend_at(r)) return poly->eval(r, 1);
  return pieces_[piece_index(r)].profile->deriv1(r);
}

double PiecewiseProfile::deriv2(double r) const {
  if (const BlendPoly* poly = blend_at(r)) return poly->eval(r, 2);
  return pieces_[piece_index(r)].profile->deriv2(r);
}

bool PiecewiseProfile::on_blend(double r) const { return blend_at(r) != nullptr; }

std::vector<double> PiecewiseProfile::knots() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(p.from);
    out.push_back(p.to);
  }
  for (const auto& poly : polys_) {
    out.push_back(poly.a);
    out.push_back(poly.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::pair<double, double>> PiecewiseProfile::blend_envelope(double r) const {
  const BlendPoly* poly = blend_at(r);
  if (!poly) return std::nullopt;
  const double vl = pieces_[poly->left_piece].profile->value(r);
  const double vr = pieces_[poly->right_piece].profile->value(r);
  return std::make_pair(std::min(vl, vr), std::max(vl, vr));
}

PiecewisePtr build_piecewise(const std::vector<std::tuple<double, double, std::string>>& pieces,
                             const std::vector<BlendSpec>& blends) {
  std::vector<Piece> ps;
  ps.reserve(pieces.size());
  for (const auto& [from, to, text] : pieces) {
    Piece p;
    p.from = from;
    p.to = to;
    p.expr_text = text;
    p.profile = std::make_shared<ExprProfile>(parse_profile(text), from, to);
    ps.push_back(std::move(p));
  }
  return std::make_shared<PiecewiseProfile>(std::move(ps), blends);
}

namespace {

const char* blend_kind_name(BlendKind k) {
  switch (k) {
    case BlendKind::exact_match: return "exact";
    case BlendKind::monotone_cubic: return "monotone-cubic";
    case BlendKind::quintic: return "quintic";
  }
  return "quintic";
}

BlendKind blend_kind_from(const std::string& s) {
  if (s == "exact" || s == "exact-match") return BlendKind::exact_match;
  if (s == "monotone-cubic" || s == "cubic") return BlendKind::monotone_cubic;
  if (s == "quintic") return BlendKind::quintic;
  throw PiecewiseError("unknown blend kind '" + s + "'");
}

}  // namespace

std::string piecewise_to_json(const PiecewiseProfile& p) {
  json j;
  j["pieces"] = json::array();
  for (const auto& piece : p.pieces()) {
    json jp;
    jp["from"] = piece.from;
    jp["to"] = piece.to;
    if (!piece.expr_text.empty()) {
      jp["expr"] = piece.expr_text;
    } else if (auto* ep = dynamic_cast<const ExprProfile*>(piece.profile.get())) {
      jp["expr"] = ep->expr().source_text;
    } else {
      throw PiecewiseError("piece is not expression-backed; cannot serialize");
    }
    j["pieces"].push_back(jp);
  }
  j["blends"] = json::array();
  for (const auto& b : p.blends()) {
    json jb;
    jb["at"] = b.at;
    jb["kind"] = blend_kind_name(b.kind);
    jb["halfwidth"] = b.halfwidth;
    j["blends"].push_back(jb);
  }
  return j.dump(2);
}

PiecewisePtr piecewise_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PiecewiseError(std::string("profile JSON parse error: ") + e.what());
  }
  std::vector<std::tuple<double, double, std::string>> pieces;
  for (const auto& jp : j.at("pieces"))
    pieces.emplace_back(jp.at("from").get<double>(), jp.at("to").get<double>(),
                        jp.at("expr").get<std::string>());
  std::vector<BlendSpec> blends;
  if (j.contains("blends"))
    for (const auto& jb : j["blends"]) {
      BlendSpec b;
      b.at = jb.at("at").get<double>();
      b.kind = blend_kind_from(jb.at("kind").get<std::string>());
      b.halfwidth = jb.at("halfwidth").get<double>();
      blends.push_back(b);
    }
  return build_piecewise(pieces, blends);
}

}  // namespace ghflat
