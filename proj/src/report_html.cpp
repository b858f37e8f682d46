#include <cstdio>
#include <sstream>
#include <string>

#include "ossrecon/report.hpp"

namespace ossrecon {

namespace {

// Chart geometry shared by all three SVGs.
constexpr double kChartW = 760.0;
constexpr double kChartH = 280.0;
constexpr double kMarginL = 48.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 18.0;
constexpr double kMarginB = 42.0;
constexpr double kPlotW = kChartW - kMarginL - kMarginR;
constexpr double kPlotH = kChartH - kMarginT - kMarginB;

constexpr const char* kCorrectiveColor = "#d62728";    // red
constexpr const char* kPerfectiveColor = "#f2c744";    // yellow
constexpr const char* kAdaptiveColor = "#1f77b4";      // blue
constexpr const char* kUnclassifiedColor = "#9e9e9e";  // gray
constexpr const char* kActivityColor = "#4a6fa5";
constexpr const char* kUnreleasedColor = "#b0bec5";

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string count_str(std::int64_t v) { return std::to_string(v); }

double x_slot(size_t i, size_t n) {
  return kMarginL + kPlotW * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

double y_of(double value, double max_value) {
  if (max_value <= 0) return kMarginT + kPlotH;
  return kMarginT + kPlotH * (1.0 - value / max_value);
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg role=\"img\" width=\"" << num(kChartW) << "\" height=\"" << num(kChartH)
      << "\" viewBox=\"0 0 " << num(kChartW) << " " << num(kChartH) << "\">\n"
      << "<title>" << escape_html(title) << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(kChartW) << "\" height=\"" << num(kChartH)
      << "\" fill=\"#ffffff\"/>\n";
}

void axes(std::ostringstream& out, double max_value) {
  const double x0 = kMarginL;
  const double y0 = kMarginT + kPlotH;
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kMarginT) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y0) << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\""
      << num(kChartW - kMarginR) << "\" y2=\"" << num(y0)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
      << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(kMarginT + 4)
      << "\" text-anchor=\"end\" class=\"axis\">" << count_str(static_cast<std::int64_t>(max_value))
      << "</text>\n"
      << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y0 + 4)
      << "\" text-anchor=\"end\" class=\"axis\">0</text>\n";
}

void tag_label(std::ostringstream& out, double x, const std::string& tag, size_t n) {
  // Skip labels when they would collide; keep every k-th tag readable.
  if (n == 0) return;
  const size_t stride = n <= 16 ? 1 : (n + 15) / 16;
  static_cast<void>(stride);
  out << "<text x=\"" << num(x) << "\" y=\"" << num(kMarginT + kPlotH + 16)
      << "\" text-anchor=\"middle\" class=\"axis\">" << escape_html(tag) << "</text>\n";
}

void legend(std::ostringstream& out,
            const std::vector<std::pair<const char*, const char*>>& entries) {
  double x = kMarginL;
  const double y = kChartH - 10.0;
  for (const auto& [color, label] : entries) {
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\""
        << " fill=\"" << color << "\"/>\n"
        << "<text x=\"" << num(x + 14) << "\" y=\"" << num(y) << "\" class=\"axis\">" << label
        << "</text>\n";
    x += 14.0 + 7.0 * std::char_traits<char>::length(label) + 18.0;
  }
}

std::string activity_chart(const AssessmentReport& report) {
  std::ostringstream out;
  open_svg(out, "Commits per release");

  std::vector<std::pair<std::string, std::int64_t>> bars;
  for (const auto& a : report.activity) bars.emplace_back(a.tag, a.commits);
  if (report.unreleased_activity) bars.emplace_back("unreleased", report.unreleased_activity->commits);

  std::int64_t max_value = 1;
  for (const auto& [tag, commits] : bars) max_value = std::max(max_value, commits);
  axes(out, static_cast<double>(max_value));

  const size_t n = bars.size();
  const double slot = kPlotW / static_cast<double>(n);
  const double width = std::min(34.0, slot * 0.7);
  const size_t stride = n <= 16 ? 1 : (n + 15) / 16;
  for (size_t i = 0; i < n; ++i) {
    const bool unreleased = report.unreleased_activity && i == n - 1;
    const double cx = x_slot(i, n);
    const double top = y_of(static_cast<double>(bars[i].second), static_cast<double>(max_value));
    out << "<rect class=\"activity-bar\" x=\"" << num(cx - width / 2) << "\" y=\"" << num(top)
        << "\" width=\"" << num(width) << "\" height=\"" << num(kMarginT + kPlotH - top)
        << "\" fill=\"" << (unreleased ? kUnreleasedColor : kActivityColor) << "\"/>\n";
    if (i % stride == 0 || unreleased) tag_label(out, cx, bars[i].first, n);
  }
  legend(out, {{kActivityColor, "released"}, {kUnreleasedColor, "unreleased"}});
  out << "</svg>\n";
  return out.str();
}

std::string classification_chart(const AssessmentReport& report) {
  std::ostringstream out;
  open_svg(out, "Commit classification per release");

  std::int64_t max_total = 1;
  for (const auto& p : report.profiles)
    max_total = std::max(max_total, p.corrective + p.adaptive + p.perfective + p.unclassified);
  axes(out, static_cast<double>(max_total));

  const size_t n = report.profiles.size();
  const double slot = n ? kPlotW / static_cast<double>(n) : kPlotW;
  const double width = std::min(34.0, slot * 0.7);
  const size_t stride = n <= 16 ? 1 : (n + 15) / 16;
  const double gap = 2.0;  // separates the unclassified segment from the classified stack

  for (size_t i = 0; i < n; ++i) {
    const ActivityProfile& p = report.profiles[i];
    const double cx = x_slot(i, n);
    const double x = cx - width / 2;
    out << "<g class=\"release-bar-group\">\n";
    double base = kMarginT + kPlotH;
    auto segment = [&](std::int64_t value, const char* color, const char* cls) {
      if (value <= 0) return;
      const double h = kPlotH * static_cast<double>(value) / static_cast<double>(max_total);
      base -= h;
      out << "<rect class=\"" << cls << "\" x=\"" << num(x) << "\" y=\"" << num(base)
          << "\" width=\"" << num(width) << "\" height=\"" << num(h) << "\" fill=\"" << color
          << "\"/>\n";
    };
    segment(p.corrective, kCorrectiveColor, "seg-corrective");
    segment(p.perfective, kPerfectiveColor, "seg-perfective");
    segment(p.adaptive, kAdaptiveColor, "seg-adaptive");
    if (p.unclassified > 0) {
      base -= gap;
      segment(p.unclassified, kUnclassifiedColor, "seg-unclassified");
    }
    out << "</g>\n";
    if (i % stride == 0)
      tag_label(out, cx, i < report.activity.size() ? report.activity[i].tag : "", n);
  }
  legend(out, {{kCorrectiveColor, "corrective"},
               {kPerfectiveColor, "perfective"},
               {kAdaptiveColor, "adaptive"},
               {kUnclassifiedColor, "unclassified"}});
  out << "</svg>\n";
  return out.str();
}

std::string maturity_chart(const AssessmentReport& report) {
  std::ostringstream out;
  open_svg(out, "Maintenance activity and crossovers");

  std::int64_t max_value = 1;
  for (const auto& p : report.profiles)
    max_value = std::max({max_value, p.corrective, p.adaptive, p.perfective});
  axes(out, static_cast<double>(max_value));

  const size_t n = report.profiles.size();
  auto polyline = [&](auto value_of, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < n; ++i) {
      if (i) out << ' ';
      out << num(x_slot(i, n)) << ','
          << num(y_of(static_cast<double>(value_of(report.profiles[i])),
                      static_cast<double>(max_value)));
    }
    out << "\"/>\n";
  };
  polyline([](const ActivityProfile& p) { return p.corrective; }, kCorrectiveColor);
  polyline([](const ActivityProfile& p) { return p.perfective; }, kPerfectiveColor);
  polyline([](const ActivityProfile& p) { return p.adaptive; }, kAdaptiveColor);

  for (const auto& e : report.crossovers) {
    const size_t i = static_cast<size_t>(e.at_ordinal);
    if (i >= n) continue;
    const double a = static_cast<double>(series_value(report.profiles[i], first_of(e.pair)));
    const double b = static_cast<double>(series_value(report.profiles[i], second_of(e.pair)));
    out << "<circle class=\"crossover-dot\" cx=\"" << num(x_slot(i, n)) << "\" cy=\""
        << num(y_of((a + b) / 2.0, static_cast<double>(max_value)))
        << "\" r=\"4\" fill=\"#222222\"/>\n";
  }

  const size_t stride = n <= 16 ? 1 : (n + 15) / 16;
  for (size_t i = 0; i < n; ++i)
    if (i % stride == 0)
      tag_label(out, x_slot(i, n), i < report.activity.size() ? report.activity[i].tag : "", n);
  legend(out, {{kCorrectiveColor, "corrective"},
               {kPerfectiveColor, "perfective"},
               {kAdaptiveColor, "adaptive"},
               {"#222222", "crossover"}});
  out << "</svg>\n";
  return out.str();
}

void card_open(std::ostringstream& out, const std::string& title) {
  out << "<section class=\"card\">\n<h2>" << escape_html(title) << "</h2>\n";
}

void row(std::ostringstream& out, const std::string& label, const std::string& value) {
  out << "<div class=\"row\"><span class=\"label\">" << escape_html(label)
      << "</span><span class=\"value\">" << escape_html(value) << "</span></div>\n";
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out.empty() ? "none" : out;
}

constexpr const char* kUnavailable = "unavailable";

}  // namespace

std::string to_html(const AssessmentReport& report) {
  std::ostringstream out;
  const std::string title =
      report.metadata ? report.metadata->name : (report.source.empty() ? "report" : report.source);

  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>" << escape_html(title) << " — assessment</title>\n"
      << "<style>\n"
      << "body{font-family:system-ui,sans-serif;margin:24px;color:#1c1c1c;background:#f6f7f9;}\n"
      << "h1{margin:0 0 4px 0;font-size:26px;}\n"
      << "h2{margin:0 0 8px 0;font-size:15px;border-bottom:1px solid #e0e0e0;padding-bottom:4px;}\n"
      << "p.description{color:#555;margin:0 0 18px 0;}\n"
      << ".grid{display:grid;grid-template-columns:repeat(auto-fill,minmax(330px,1fr));gap:14px;}\n"
      << ".card{background:#fff;border:1px solid #e2e2e2;border-radius:6px;padding:12px 14px;}\n"
      << ".row{display:flex;justify-content:space-between;padding:2px 0;font-size:13.5px;}\n"
      << ".label{color:#666;}\n"
      << ".value{font-variant-numeric:tabular-nums;text-align:right;}\n"
      << ".big{font-size:30px;font-weight:600;margin:4px 0;}\n"
      << ".charts{margin-top:18px;display:flex;flex-direction:column;gap:14px;}\n"
      << ".axis{font-size:10.5px;fill:#555;font-family:system-ui,sans-serif;}\n"
      << ".notice{background:#fff4d6;border:1px solid #e0c770;padding:10px 14px;"
      << "border-radius:6px;margin-top:18px;}\n"
      << ".warnings{margin-top:18px;font-size:13px;color:#8a5200;}\n"
      << "table{border-collapse:collapse;width:100%;font-size:13px;}\n"
      << "td,th{border-bottom:1px solid #eee;padding:3px 6px;text-align:left;}\n"
      << "</style>\n</head>\n<body>\n";

  out << "<h1>" << escape_html(title) << "</h1>\n";
  if (report.metadata && report.metadata->description)
    out << "<p class=\"description\">" << escape_html(*report.metadata->description) << "</p>\n";
  out << "<p class=\"description\">Source: " << escape_html(report.source)
      << " · Generated: " << escape_html(iso_utc(report.generated_at)) << "</p>\n";

  out << "<div class=\"grid\">\n";

  card_open(out, "Repository");
  if (report.metadata) {
    const RepoMetadata& m = *report.metadata;
    row(out, "Name", m.name);
    row(out, "Topics", m.topics ? joined(*m.topics) : kUnavailable);
    std::string langs;
    size_t shown = 0;
    std::int64_t total_bytes = 0;
    for (const auto& [name, bytes] : m.languages) total_bytes += bytes;
    for (const auto& [name, bytes] : m.languages) {
      if (shown == 5) break;
      if (!langs.empty()) langs += ", ";
      langs += name;
      if (total_bytes > 0)
        langs += " (" + std::to_string(bytes * 100 / total_bytes) + "%)";
      ++shown;
    }
    row(out, "Languages", langs.empty() ? "none reported" : langs);
    row(out, "Community health",
        m.community_health_pct ? std::to_string(*m.community_health_pct) + "%" : kUnavailable);
  } else {
    row(out, "Metadata", kUnavailable);
  }
  out << "</section>\n";

  card_open(out, "Activeness");
  row(out, "Repository age (days)", fixed2(report.mining.repo_age_days));
  row(out, "Last updated", iso_utc(report.mining.last_updated));
  row(out, "Releases", count_str(report.mining.release_count));
  row(out, "Avg days between releases", fixed2(report.mining.avg_days_between_releases));
  row(out, "Total commits", count_str(report.mining.total_commits));
  row(out, "Open issues",
      report.metadata ? count_str(report.metadata->open_issues) : kUnavailable);
  out << "</section>\n";

  card_open(out, "Community interest");
  if (report.community) {
    row(out, "Stars", count_str(report.community->stars));
    row(out, "Forks", count_str(report.community->forks));
    row(out, "Watchers", count_str(report.community->watchers));
  } else {
    row(out, "Community interest", kUnavailable);
  }
  out << "</section>\n";

  card_open(out, "Support");
  if (report.support) {
    row(out, "Q&A tag",
        report.support->tag + (report.support_tag_defaulted ? " (defaulted)" : ""));
    row(out, "Questions", count_str(report.support->question_count));
    row(out, "Answered", count_str(report.support->answered_count));
    if (report.support->question_count > 0) {
      const double pct = 100.0 * static_cast<double>(report.support->answered_count) /
                         static_cast<double>(report.support->question_count);
      row(out, "Answered share", fixed2(pct) + "%");
    }
  } else {
    row(out, "Support stats", kUnavailable);
  }
  out << "</section>\n";

  card_open(out, "Security");
  if (report.vulnerabilities) {
    row(out, "Known vulnerability findings", count_str(
        static_cast<std::int64_t>(report.vulnerabilities->size())));
    if (!report.vulnerabilities->empty()) {
      out << "<table>\n<tr><th>Advisory</th><th>Package</th><th>Severity</th></tr>\n";
      size_t shown = 0;
      for (const auto& v : *report.vulnerabilities) {
        if (shown == 10) break;
        out << "<tr><td>" << escape_html(v.advisory_id) << "</td><td>"
            << escape_html(v.affected_package) << "</td><td>" << to_string(v.severity)
            << "</td></tr>\n";
        ++shown;
      }
      out << "</table>\n";
      if (report.vulnerabilities->size() > 10)
        out << "<p class=\"label\">…and " << (report.vulnerabilities->size() - 10)
            << " more in report.json</p>\n";
    }
  } else {
    row(out, "Vulnerability scan", kUnavailable);
  }
  out << "</section>\n";

  card_open(out, "Legal");
  if (report.license) {
    row(out, "License", report.license->spdx_id);
    row(out, "Permissions", joined(report.license->permissions));
    row(out, "Conditions", joined(report.license->conditions));
    row(out, "Limitations", joined(report.license->limitations));
  } else {
    row(out, "License", kUnavailable);
  }
  out << "</section>\n";

  card_open(out, "Commit maturity");
  out << "<div class=\"big\">" << fixed2(report.maturity.maturity_ratio) << "</div>\n";
  row(out, "Crossovers / releases",
      count_str(report.maturity.total_crossovers) + " / " +
          count_str(report.maturity.release_count));
  row(out, "Adaptive–Corrective", count_str(report.maturity.adaptive_corrective));
  row(out, "Adaptive–Perfective", count_str(report.maturity.adaptive_perfective));
  row(out, "Corrective–Perfective", count_str(report.maturity.corrective_perfective));
  out << "</section>\n";

  out << "</div>\n";

  if (report.mining.release_count == 0) {
    out << "<p class=\"notice\">No releases found — activity, classification and maturity "
           "charts need at least one tagged release.</p>\n";
  } else {
    out << "<div class=\"charts\">\n";
    out << "<section class=\"card\"><h2>Commit activity</h2>\n"
        << activity_chart(report) << "</section>\n";
    out << "<section class=\"card\"><h2>Commit classification</h2>\n"
        << classification_chart(report) << "</section>\n";
    out << "<section class=\"card\"><h2>Commit maturity</h2>\n"
        << maturity_chart(report) << "</section>\n";
    out << "</div>\n";
  }

  if (!report.warnings.empty()) {
    out << "<div class=\"warnings\"><strong>Warnings</strong><ul>\n";
    for (const auto& w : report.warnings) out << "<li>" << escape_html(w) << "</li>\n";
    out << "</ul></div>\n";
  }

  out << "</body>\n</html>\n";
  return out.str();
}

}  // namespace ossrecon
