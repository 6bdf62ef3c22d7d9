#include "catforge/charts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "catforge/irt.hpp"
#include "detail_format.hpp"

namespace catforge {

namespace {

using detail::format_full;
using detail::format_label;
using detail::format_px;

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 70.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

constexpr const char* kPalette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8a5fbf"};

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;

    double clamp_pad() {
        if (!(hi > lo)) {  // degenerate data, widen symmetrically
            lo -= 0.5;
            hi += 0.5;
        }
        return hi - lo;
    }
};

class SvgCanvas {
public:
    SvgCanvas(AxisRange x, AxisRange y, std::string title, std::string x_label,
              std::string y_label)
        : x_(x), y_(y) {
        x_.clamp_pad();
        y_.clamp_pad();
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
              << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
              << kHeight << "\">\n";
        body_ << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
              << "\" fill=\"white\"/>\n";
        text(kWidth / 2.0, kMarginTop - 16.0, title, "middle", 16);
        text(kWidth / 2.0, kHeight - 12.0, x_label, "middle", 13);
        vertical_text(18.0, kHeight / 2.0, y_label);
        axes();
    }

    double px(double x) const {
        return kMarginLeft + (x - x_.lo) / (x_.hi - x_.lo) *
                                 (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom - (y - y_.lo) / (y_.hi - y_.lo) *
                                             (kHeight - kMarginTop - kMarginBottom);
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const char* color, const char* dash = nullptr) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1.5\"";
        if (dash != nullptr) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
            if (!first) body_ << ' ';
            body_ << format_px(px(xs[i])) << ',' << format_px(py(ys[i]));
            first = false;
        }
        body_ << "\"/>\n";
    }

    void hline(double y, const char* color, const char* dash = "6,4") {
        body_ << "<line x1=\"" << format_px(px(x_.lo)) << "\" y1=\""
              << format_px(py(y)) << "\" x2=\"" << format_px(px(x_.hi))
              << "\" y2=\"" << format_px(py(y)) << "\" stroke=\"" << color
              << "\" stroke-width=\"1.2\" stroke-dasharray=\"" << dash << "\"/>\n";
    }

    void circle(double x, double y, const char* color) {
        body_ << "<circle cx=\"" << format_px(px(x)) << "\" cy=\"" << format_px(py(y))
              << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    }

    void rect(double x0, double x1, double y, const char* color) {
        const double left = px(x0);
        const double right = px(x1);
        const double top = py(y);
        const double bottom = py(y_.lo);
        body_ << "<rect x=\"" << format_px(left) << "\" y=\"" << format_px(top)
              << "\" width=\"" << format_px(std::max(0.5, right - left))
              << "\" height=\"" << format_px(std::max(0.0, bottom - top))
              << "\" fill=\"" << color << "\"/>\n";
    }

    void legend_entry(std::size_t slot, const std::string& label, const char* color) {
        const double x = kMarginLeft + 12.0 + 150.0 * static_cast<double>(slot);
        const double y = kMarginTop + 14.0;
        body_ << "<line x1=\"" << format_px(x) << "\" y1=\"" << format_px(y - 4.0)
              << "\" x2=\"" << format_px(x + 22.0) << "\" y2=\""
              << format_px(y - 4.0) << "\" stroke=\"" << color
              << "\" stroke-width=\"2\"/>\n";
        text(x + 28.0, y, label, "start", 12);
    }

    void finish(const std::filesystem::path& path) {
        body_ << "</svg>\n";
        std::ofstream out(path);
        if (!out) throw ParseError("cannot open for writing: " + path.string());
        out << body_.str();
        if (!out) throw ParseError("failed writing: " + path.string());
    }

private:
    void text(double x, double y, const std::string& content, const char* anchor,
              int size) {
        body_ << "<text x=\"" << format_px(x) << "\" y=\"" << format_px(y)
              << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\""
              << " font-size=\"" << size << "\">" << content << "</text>\n";
    }

    void vertical_text(double x, double y, const std::string& content) {
        body_ << "<text x=\"" << format_px(x) << "\" y=\"" << format_px(y)
              << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
              << " font-size=\"13\" transform=\"rotate(-90 " << format_px(x) << ' '
              << format_px(y) << ")\">" << content << "</text>\n";
    }

    void axes() {
        const double x0 = kMarginLeft;
        const double x1 = kWidth - kMarginRight;
        const double y0 = kHeight - kMarginBottom;
        const double y1 = kMarginTop;
        body_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
              << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
        body_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
              << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double fx = x_.lo + (x_.hi - x_.lo) * i / 5.0;
            const double sx = px(fx);
            body_ << "<line x1=\"" << format_px(sx) << "\" y1=\"" << format_px(y0)
                  << "\" x2=\"" << format_px(sx) << "\" y2=\"" << format_px(y0 + 5.0)
                  << "\" stroke=\"black\"/>\n";
            text(sx, y0 + 20.0, format_label(fx), "middle", 11);
            const double fy = y_.lo + (y_.hi - y_.lo) * i / 5.0;
            const double sy = py(fy);
            body_ << "<line x1=\"" << format_px(x0 - 5.0) << "\" y1=\""
                  << format_px(sy) << "\" x2=\"" << format_px(x0) << "\" y2=\""
                  << format_px(sy) << "\" stroke=\"black\"/>\n";
            text(x0 - 9.0, sy + 4.0, format_label(fy), "end", 11);
        }
    }

    AxisRange x_;
    AxisRange y_;
    std::ostringstream body_;
};

std::filesystem::path sidecar_path(const std::filesystem::path& svg_path) {
    std::filesystem::path out = svg_path;
    out.replace_extension(".csv");
    return out;
}

std::ofstream open_sidecar(const std::filesystem::path& svg_path) {
    const auto path = sidecar_path(svg_path);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    return out;
}

AxisRange finite_range(const std::vector<const std::vector<double>*>& series,
                       double pad_fraction) {
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (const auto* s : series) {
        for (double v : *s) {
            if (!std::isfinite(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (lo > hi) {  // no finite data at all
        lo = 0.0;
        hi = 1.0;
    }
    const double pad = (hi - lo) * pad_fraction;
    return {lo - pad, hi + pad};
}

}  // namespace

void plot_item_curve(const Item& item, ItemCurveKind kind,
                     const std::filesystem::path& svg_path) {
    item.check();
    constexpr std::size_t kSamples = 481;
    std::vector<double> thetas(kSamples), probs(kSamples), infos(kSamples);
    for (std::size_t i = 0; i < kSamples; ++i) {
        const double t =
            kThetaLo + (kThetaHi - kThetaLo) * static_cast<double>(i) /
                           static_cast<double>(kSamples - 1);
        thetas[i] = t;
        probs[i] = irt::icc(t, item);
        infos[i] = irt::inf(t, item);
    }
    const double peak_theta = irt::max_info(item);

    const bool with_icc = kind != ItemCurveKind::Iic;
    const bool with_iic = kind != ItemCurveKind::Icc;

    {
        auto csv = open_sidecar(svg_path);
        csv << "theta";
        if (with_icc) csv << ",icc";
        if (with_iic) csv << ",iic";
        csv << '\n';
        for (std::size_t i = 0; i < kSamples; ++i) {
            csv << format_full(thetas[i]);
            if (with_icc) csv << ',' << format_full(probs[i]);
            if (with_iic) csv << ',' << format_full(infos[i]);
            csv << '\n';
        }
    }

    // Probabilities and information share the canvas; the y range covers
    // both so a single scale stays honest.
    std::vector<const std::vector<double>*> series;
    if (with_icc) series.push_back(&probs);
    if (with_iic) series.push_back(&infos);
    AxisRange y = finite_range(series, 0.05);
    if (with_icc) {
        y.lo = std::min(y.lo, 0.0);
        y.hi = std::max(y.hi, 1.0);
    }

    SvgCanvas canvas({kThetaLo, kThetaHi}, y, "item curve", "theta",
                     with_icc && !with_iic ? "P(correct)" : "value");
    std::size_t slot = 0;
    if (with_icc) {
        canvas.polyline(thetas, probs, kPalette[0]);
        canvas.legend_entry(slot++, "characteristic", kPalette[0]);
    }
    if (with_iic) {
        canvas.polyline(thetas, infos, kPalette[1]);
        canvas.legend_entry(slot++, "information", kPalette[1]);
    }
    // One marker at the maximum-information point, on whichever curve the
    // chart shows (the information curve when present).
    if (with_iic) {
        canvas.circle(peak_theta, irt::inf(peak_theta, item), kPalette[1]);
    } else {
        canvas.circle(peak_theta, irt::icc(peak_theta, item), kPalette[0]);
    }
    canvas.finish(svg_path);
}

void plot_test_progress(const ExamineeState& state, TestProgressFlags flags,
                        const std::filesystem::path& svg_path) {
    if (!flags.info && !flags.var && !flags.see && !flags.true_theta) {
        throw DomainError("test progress chart needs at least one trace flag");
    }
    if (state.estimates.empty()) {
        throw DomainError("test progress chart needs a nonempty state");
    }
    const std::size_t steps = state.administered.size();

    std::vector<double> xs(steps + 1);
    std::iota(xs.begin(), xs.end(), 0.0);
    std::vector<double> xs_tail(xs.begin() + 1, xs.end());

    {
        auto csv = open_sidecar(svg_path);
        csv << "step,theta_hat";
        if (flags.info) csv << ",info";
        if (flags.var) csv << ",var";
        if (flags.see) csv << ",see";
        if (flags.true_theta) csv << ",true_theta";
        csv << '\n';
        for (std::size_t i = 0; i <= steps; ++i) {
            csv << i << ',' << format_full(state.estimates[i]);
            // The pre-test estimate has no administered item yet, so the
            // measurement columns stay empty on the step-0 row.
            if (flags.info) csv << ',' << (i == 0 ? "" : format_full(state.info_trace[i - 1]));
            if (flags.var) csv << ',' << (i == 0 ? "" : format_full(state.var_trace[i - 1]));
            if (flags.see) csv << ',' << (i == 0 ? "" : format_full(state.see_trace[i - 1]));
            if (flags.true_theta) csv << ',' << format_full(state.true_theta);
            csv << '\n';
        }
    }

    std::vector<const std::vector<double>*> series{&state.estimates};
    if (flags.info) series.push_back(&state.info_trace);
    if (flags.var) series.push_back(&state.var_trace);
    if (flags.see) series.push_back(&state.see_trace);
    std::vector<double> reference{state.true_theta};
    if (flags.true_theta) series.push_back(&reference);
    const AxisRange y = finite_range(series, 0.08);

    SvgCanvas canvas({0.0, static_cast<double>(std::max<std::size_t>(steps, 1))}, y,
                     "test progress", "items administered", "value");
    std::size_t slot = 0;
    canvas.polyline(xs, state.estimates, kPalette[0]);
    canvas.legend_entry(slot++, "estimate", kPalette[0]);
    if (flags.info) {
        canvas.polyline(xs_tail, state.info_trace, kPalette[1]);
        canvas.legend_entry(slot++, "information", kPalette[1]);
    }
    if (flags.var) {
        canvas.polyline(xs_tail, state.var_trace, kPalette[2]);
        canvas.legend_entry(slot++, "variance", kPalette[2]);
    }
    if (flags.see) {
        canvas.polyline(xs_tail, state.see_trace, kPalette[3]);
        canvas.legend_entry(slot++, "SEE", kPalette[3]);
    }
    if (flags.true_theta) {
        canvas.hline(state.true_theta, "#444444");
        canvas.legend_entry(slot++, "true theta", "#444444");
    }
    canvas.finish(svg_path);
}

void plot_item_exposure(const ItemBank& bank, std::optional<char> sort_par,
                        ExposureStyle style, const std::filesystem::path& svg_path) {
    if (bank.empty()) throw DomainError("exposure chart needs a nonempty bank");
    std::vector<std::size_t> order(bank.size());
    std::iota(order.begin(), order.end(), 0);
    if (sort_par) {
        const char par = *sort_par;
        auto key = [&](std::size_t i) -> double {
            const Item& item = bank.item(i);
            switch (par) {
                case 'a': return item.a;
                case 'b': return item.b;
                case 'c': return item.c;
                case 'd': return item.d;
                case 'r': return item.r;
                default:
                    throw DomainError(std::string("unknown sort parameter '") + par +
                                      "' (expected a, b, c, d or r)");
            }
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return key(l) < key(r); });
    }

    std::vector<double> xs(order.size()), rates(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        xs[i] = static_cast<double>(i);
        rates[i] = bank.item(order[i]).r;
    }

    {
        auto csv = open_sidecar(svg_path);
        csv << "position,item_index,r\n";
        for (std::size_t i = 0; i < order.size(); ++i) {
            csv << i << ',' << order[i] << ',' << format_full(rates[i]) << '\n';
        }
    }

    AxisRange y = finite_range({&rates}, 0.05);
    y.lo = std::min(y.lo, 0.0);
    SvgCanvas canvas({-0.5, static_cast<double>(order.size()) - 0.5}, y,
                     "item exposure", sort_par ? std::string("items sorted by ") + *sort_par
                                               : "item",
                     "exposure rate");
    if (style == ExposureStyle::Line) {
        canvas.polyline(xs, rates, kPalette[0]);
    } else {
        for (std::size_t i = 0; i < order.size(); ++i) {
            canvas.rect(xs[i] - 0.4, xs[i] + 0.4, rates[i], kPalette[0]);
        }
    }
    canvas.finish(svg_path);
}

}  // namespace catforge
