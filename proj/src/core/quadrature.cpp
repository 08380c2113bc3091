#include "core/quadrature.hpp"

#include <cmath>

namespace obslearn {

namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) and weights; the embedded
// 7-point Gauss rule sits on the odd-indexed nodes plus the center.
const double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct panel_result {
  double kronrod;
  double err;
};

panel_result gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double pair = f(c - dx) + f(c + dx);
    resk += wgk[j] * pair;
    if (j % 2 == 1) resg += wg[j / 2] * pair;
  }
  resk *= h;
  resg *= h;
  return {resk, std::fabs(resk - resg)};
}

struct adapt_state {
  const std::function<double(double)>& f;
  const quad_settings& settings;
  double total_width;
  int panels_used = 0;
};

double adapt(adapt_state& st, double lo, double hi, const panel_result& pr) {
  const double width = hi - lo;
  const double abs_share = st.settings.abs_tol * (width / st.total_width);
  if (pr.err <= abs_share || pr.err <= st.settings.rel_tol * std::fabs(pr.kronrod)) return pr.kronrod;
  if (st.panels_used >= st.settings.max_subdivisions)
    fail(errc::internal, "quadrature: subdivision limit exceeded");
  st.panels_used += 1;
  const double mid = 0.5 * (lo + hi);
  if (!(lo < mid && mid < hi)) return pr.kronrod;  // interval exhausted at machine precision
  const panel_result left = gk15(st.f, lo, mid);
  const panel_result right = gk15(st.f, mid, hi);
  return adapt(st, lo, mid, left) + adapt(st, mid, hi, right);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const quad_settings& settings) {
  if (std::isnan(lo) || std::isnan(hi) || !std::isfinite(lo) || !std::isfinite(hi))
    fail(errc::invalid_argument, "integrate: endpoints must be finite");
  if (lo == hi) return 0.0;
  if (lo > hi) fail(errc::invalid_argument, "integrate: endpoints out of order");
  adapt_state st{f, settings, hi - lo, 0};
  return adapt(st, lo, hi, gk15(f, lo, hi));
}

}  // namespace obslearn
