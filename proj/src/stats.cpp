/*
 * Copyright 2026 The Autoreview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "autoreview/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "autoreview/error.hpp"
#include "text_util.hpp"

namespace autoreview {

std::string_view to_string(ReviewerKind kind) {
  return kind == ReviewerKind::kHuman ? "human" : "gpt";
}

std::optional<ReviewerKind> parse_reviewer_kind(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "human") return ReviewerKind::kHuman;
  if (lower == "gpt") return ReviewerKind::kGpt;
  return std::nullopt;
}

std::vector<RatingRecord> apply_missing_rule(const std::vector<RatingRecord>& ratings,
                                             const std::vector<ExpectedReview>& expected) {
  if (expected.empty()) throw Error(ErrorCode::kInvalidArgument, "no expected reviews");
  std::vector<RatingRecord> out;
  std::map<ExpectedReview, std::optional<int>> seen;
  for (const RatingRecord& r : ratings) {
    if (r.rating && (*r.rating < 1 || *r.rating > 5)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rating " + std::to_string(*r.rating) + " for " + r.paper_id + " is outside 1..5");
    }
    const ExpectedReview key{r.paper_id, r.reviewer_kind};
    const std::optional<int> scored = r.rating ? r.rating : std::optional<int>(1);
    auto [it, inserted] = seen.emplace(key, r.rating);
    if (!inserted) {
      const std::optional<int> previous = it->second ? it->second : std::optional<int>(1);
      if (previous != scored) {
        throw Error(ErrorCode::kDuplicateRating, "conflicting ratings for " + r.paper_id + " (" +
                                                     std::string(to_string(r.reviewer_kind)) + ")");
      }
      continue;
    }
    out.push_back({r.paper_id, r.reviewer_kind, scored});
  }
  for (const ExpectedReview& e : expected) {
    if (seen.emplace(e, std::nullopt).second) out.push_back({e.first, e.second, 1});
  }
  return out;
}

SummaryStat mean_ci(std::span<const double> values, double z, std::string label) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "mean_ci needs at least one value");
  SummaryStat stat;
  stat.n = values.size();
  stat.label = std::move(label);
  double sum = 0.0;
  for (double v : values) sum += v;
  stat.mean = sum / static_cast<double>(stat.n);
  if (stat.n == 1) {
    stat.degenerate = true;
    return stat;
  }
  double squares = 0.0;
  for (double v : values) squares += (v - stat.mean) * (v - stat.mean);
  const double sd = std::sqrt(squares / static_cast<double>(stat.n - 1));
  stat.ci_half_width = z * sd / std::sqrt(static_cast<double>(stat.n));
  return stat;
}

SummaryStat recall_ci(const std::vector<bool>& outcomes, std::string label) {
  std::vector<double> encoded;
  encoded.reserve(outcomes.size());
  for (bool b : outcomes) encoded.push_back(b ? 1.0 : 0.0);
  return mean_ci(encoded, kZ95, std::move(label));
}

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  double x = value * scale;
  x += std::copysign(1e-9 * std::max(1.0, std::fabs(x)), x);
  return std::copysign(std::floor(std::fabs(x) + 0.5), value) / scale;
}

std::string format_fixed(double value, int decimals) {
  double rounded = round_half_away(value, decimals);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

std::string format_mean_ci(const SummaryStat& stat) {
  return format_fixed(stat.mean) + " \xC2\xB1 " + format_fixed(stat.ci_half_width);
}

// ---------------------------------------------------------------------------

std::string encode_csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    const std::string& f = fields[i];
    const bool quote = f.find_first_of(",\"\r\n") != std::string::npos ||
                       (!f.empty() && (detail::is_space(f.front()) || detail::is_space(f.back())));
    if (!quote) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
    ++i;
  }
  if (quoted) throw Error(ErrorCode::kSchemaMismatch, "unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<WorksheetRow> rows_from_csv(const std::vector<std::vector<std::string>>& table,
                                        const std::filesystem::path& path) {
  if (table.empty()) throw Error(ErrorCode::kSchemaMismatch, path.string() + " has no header");
  if (encode_csv_row(table.front()) != kWorksheetHeader) {
    throw Error(ErrorCode::kSchemaMismatch, path.string() + ": header is '" +
                                                encode_csv_row(table.front()) + "', expected '" +
                                                std::string(kWorksheetHeader) + "'");
  }
  std::vector<WorksheetRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != 5) {
      throw Error(ErrorCode::kSchemaMismatch, path.string() + ": record " + std::to_string(i) +
                                                  " has " + std::to_string(f.size()) + " fields");
    }
    rows.push_back({f[0], f[1], f[2], f[3], f[4]});
  }
  return rows;
}

}  // namespace

std::vector<WorksheetRow> worksheet_load(const std::filesystem::path& path) {
  return rows_from_csv(parse_csv(detail::read_file(path)), path);
}

void worksheet_append(const std::filesystem::path& path, const std::vector<WorksheetRow>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  if (!fresh) {
    const std::string existing = detail::read_file(path);
    rows_from_csv(parse_csv(existing), path);
    if (!existing.empty() && existing.back() != '\n') {
      throw Error(ErrorCode::kSchemaMismatch, path.string() + " does not end with a newline");
    }
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot append to " + path.string());
  if (fresh) out << kWorksheetHeader << '\n';
  for (const WorksheetRow& r : rows) {
    out << encode_csv_row({r.paper_id, r.reviewer_kind, r.rating, r.review_path, r.attempts}) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing " + path.string());
}

WorksheetSummary summarize_worksheet(const std::vector<WorksheetRow>& rows) {
  WorksheetSummary summary;
  std::vector<RatingRecord> ratings;
  std::vector<std::string> papers;
  std::set<ReviewerKind> kinds;
  std::map<ReviewerKind, std::size_t> unrated;
  std::vector<std::string> detection_order;
  std::map<std::string, std::vector<bool>> detection;

  for (const WorksheetRow& row : rows) {
    if (auto kind = parse_reviewer_kind(row.reviewer_kind)) {
      kinds.insert(*kind);
      if (std::find(papers.begin(), papers.end(), row.paper_id) == papers.end()) {
        papers.push_back(row.paper_id);
      }
      const std::string rating(detail::trim(row.rating));
      if (rating.empty()) {
        ++unrated[*kind];
        continue;
      }
      RatingRecord record{row.paper_id, *kind, std::nullopt};
      if (rating != kMissingRating) {
        try {
          record.rating = std::stoi(rating);
        } catch (const std::exception&) {
          throw Error(ErrorCode::kInvalidArgument, "rating '" + rating + "' for " + row.paper_id);
        }
      }
      ratings.push_back(std::move(record));
      continue;
    }
    if (row.reviewer_kind.find('/') != std::string::npos) {
      const std::string rating(detail::trim(row.rating));
      if (rating != "0" && rating != "1") {
        throw Error(ErrorCode::kInvalidArgument,
                    "detection row for " + row.paper_id + " must have rating 0 or 1");
      }
      if (!detection.count(row.reviewer_kind)) detection_order.push_back(row.reviewer_kind);
      detection[row.reviewer_kind].push_back(rating == "1");
      continue;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown reviewer_kind '" + row.reviewer_kind + "'");
  }

  if (!papers.empty() && !kinds.empty()) {
    std::vector<ExpectedReview> expected;
    for (ReviewerKind kind : kinds) {
      for (const std::string& paper : papers) expected.emplace_back(paper, kind);
    }
    // Pairs that are only "not rated yet" are not missing reviews.
    std::set<ExpectedReview> pending;
    for (const WorksheetRow& row : rows) {
      auto kind = parse_reviewer_kind(row.reviewer_kind);
      if (kind && detail::trim(row.rating).empty()) pending.emplace(row.paper_id, *kind);
    }
    std::set<ExpectedReview> rated;
    for (const RatingRecord& r : ratings) rated.emplace(r.paper_id, r.reviewer_kind);
    std::erase_if(expected, [&](const ExpectedReview& e) { return pending.count(e) && !rated.count(e); });

    std::set<ExpectedReview> present;
    for (const RatingRecord& r : ratings) {
      if (r.rating) present.emplace(r.paper_id, r.reviewer_kind);
    }
    if (!expected.empty()) {
      const auto scored = apply_missing_rule(ratings, expected);
      for (ReviewerKind kind : kinds) {
        ReviewerSummary rs;
        rs.kind = kind;
        rs.unrated = unrated[kind];
        std::vector<double> all;
        std::vector<double> kept;
        for (const RatingRecord& r : scored) {
          if (r.reviewer_kind != kind) continue;
          all.push_back(*r.rating);
          if (present.count({r.paper_id, kind})) {
            kept.push_back(*r.rating);
          } else {
            ++rs.missing;
          }
        }
        if (all.empty()) continue;
        rs.scored = mean_ci(all, kZ95, std::string(to_string(kind)));
        if (rs.missing > 0 && !kept.empty()) {
          rs.excluding_missing = mean_ci(kept, kZ95, std::string(to_string(kind)) + " (missing excluded)");
        }
        summary.reviewers.push_back(std::move(rs));
      }
    }
  }

  for (const std::string& key : detection_order) {
    const auto slash = key.rfind('/');
    RecallCell cell;
    cell.model_label = key.substr(0, slash);
    cell.attack_kind = key.substr(slash + 1);
    cell.stat = recall_ci(detection[key], key);
    summary.detection.push_back(std::move(cell));
  }
  return summary;
}

namespace {

std::string pad(std::string s, std::size_t width) {
  const std::size_t cps = detail::code_points(s);
  if (cps < width) s.append(width - cps, ' ');
  return s;
}

std::string column_title(const std::string& kind) {
  if (kind == "abstract-swap") return "Abstract Swap";
  if (kind == "informal") return "Informal Sentence Insertion";
  return kind;
}

std::string render_table(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths;
  for (const auto& row : cells) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], detail::code_points(row[c]));
    }
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c > 0) line += " | ";
      line += c + 1 == cells[r].size() ? cells[r][c] : pad(cells[r][c], widths[c]);
    }
    out += line + "\n";
    if (r == 0) {
      std::string rule;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        if (c > 0) rule += "-+-";
        rule.append(widths[c], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

}  // namespace

std::string format_recall_table(const std::vector<RecallCell>& cells) {
  std::vector<std::string> models;
  std::vector<std::string> kinds;
  for (const char* k : {"abstract-swap", "informal"}) {
    if (std::any_of(cells.begin(), cells.end(), [&](const RecallCell& c) { return c.attack_kind == k; })) {
      kinds.emplace_back(k);
    }
  }
  for (const RecallCell& c : cells) {
    if (std::find(models.begin(), models.end(), c.model_label) == models.end()) models.push_back(c.model_label);
    if (std::find(kinds.begin(), kinds.end(), c.attack_kind) == kinds.end()) kinds.push_back(c.attack_kind);
  }
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"Model"};
  for (const auto& k : kinds) header.push_back(column_title(k));
  table.push_back(std::move(header));
  for (const auto& m : models) {
    std::vector<std::string> row{m};
    for (const auto& k : kinds) {
      auto it = std::find_if(cells.begin(), cells.end(), [&](const RecallCell& c) {
        return c.model_label == m && c.attack_kind == k;
      });
      row.push_back(it == cells.end() ? "-" : format_mean_ci(it->stat));
    }
    table.push_back(std::move(row));
  }
  return render_table(table);
}

std::string format_reviewer_table(const std::vector<ReviewerSummary>& reviewers) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"Reviewer", "Helpfulness", "n", "Missing", "Missing excluded"});
  for (const auto& r : reviewers) {
    table.push_back({std::string(to_string(r.kind)), format_mean_ci(r.scored), std::to_string(r.scored.n),
                     std::to_string(r.missing),
                     r.excluding_missing ? format_mean_ci(*r.excluding_missing) + " (n=" +
                                               std::to_string(r.excluding_missing->n) + ")"
                                         : "-"});
  }
  return render_table(table);
}

}  // namespace autoreview
