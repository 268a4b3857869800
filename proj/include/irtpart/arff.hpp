#ifndef IRTPART_ARFF_HPP
#define IRTPART_ARFF_HPP

#include <string>
#include <string_view>
#include <vector>

#include "irtpart/dataset.hpp"

namespace irtpart {

namespace detail {

inline std::string strip_arff_quotes(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') || (s.front() == '"' && s.back() == '"')))
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower((unsigned char)a[i]) != std::tolower((unsigned char)b[i])) return false;
  return true;
}

inline std::vector<std::string> split_arff_values(std::string_view body) {
  // Comma-separated, values may be quoted with ' or ".
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      if (c == quote)
        quote = 0;
      else
        cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == ',') {
      out.push_back(std::string(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quote) throw DataError("arff: unterminated quote");
  out.push_back(std::string(trim(cur)));
  return out;
}

}  // namespace detail

/// Dense ARFF: @relation, @attribute (numeric/real/integer or {nominal}),
/// @data, % comments. The last nominal attribute is the target unless
/// `target_name` says otherwise. Sparse {index value} rows are not supported.
inline Dataset parse_arff(std::string_view text, const std::string& positive_label,
                          const std::string& target_name = "") {
  detail::RawTable table;
  table.kinds_declared = true;
  bool in_data = false;
  bool saw_relation = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    line = trim(line);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data && line.front() == '@') {
      const std::size_t sp = line.find_first_of(" \t");
      std::string_view keyword = sp == std::string_view::npos ? line : line.substr(0, sp);
      std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp + 1));
      if (detail::iequals(keyword, "@relation")) {
        saw_relation = true;
      } else if (detail::iequals(keyword, "@attribute")) {
        // Name may be quoted and may contain spaces.
        std::string name;
        std::string_view type_part;
        if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
          const char q = rest.front();
          const std::size_t close = rest.find(q, 1);
          if (close == std::string_view::npos) throw DataError("arff: unterminated attribute name");
          name = std::string(rest.substr(1, close - 1));
          type_part = trim(rest.substr(close + 1));
        } else {
          const std::size_t sep = rest.find_first_of(" \t");
          if (sep == std::string_view::npos) throw DataError("arff: attribute without a type");
          name = std::string(rest.substr(0, sep));
          type_part = trim(rest.substr(sep + 1));
        }
        table.column_names.push_back(name);
        if (!type_part.empty() && type_part.front() == '{') {
          if (type_part.back() != '}') throw DataError("arff: malformed nominal specification");
          auto levels = detail::split_arff_values(type_part.substr(1, type_part.size() - 2));
          for (auto& l : levels) l = detail::strip_arff_quotes(l);
          table.kinds.push_back(FeatureKind::nominal);
          table.declared_levels.push_back(std::move(levels));
        } else if (detail::iequals(type_part, "numeric") || detail::iequals(type_part, "real") ||
                   detail::iequals(type_part, "integer")) {
          table.kinds.push_back(FeatureKind::numeric);
          table.declared_levels.push_back({});
        } else {
          throw DataError("arff: unsupported attribute type '" + std::string(type_part) + "'");
        }
      } else if (detail::iequals(keyword, "@data")) {
        if (table.column_names.empty()) throw DataError("arff: @data before any @attribute");
        in_data = true;
      } else {
        throw DataError("arff: unknown declaration '" + std::string(keyword) + "'");
      }
      continue;
    }

    if (!in_data) throw DataError("arff: data row before @data");
    if (line.front() == '{') throw DataError("arff: sparse data rows are not supported");
    auto values = detail::split_arff_values(line);
    for (auto& v : values) v = detail::strip_arff_quotes(v);
    table.rows.push_back(std::move(values));
  }

  if (!saw_relation) throw DataError("arff: missing @relation");
  if (!in_data) throw DataError("arff: missing @data");
  if (table.rows.empty()) throw DataError("arff: no data rows");

  std::size_t target_col = table.column_names.size();
  if (!target_name.empty()) {
    for (std::size_t c = 0; c < table.column_names.size(); ++c)
      if (table.column_names[c] == target_name) target_col = c;
    if (target_col == table.column_names.size())
      throw DataError("arff: target attribute '" + target_name + "' not found");
  } else {
    for (std::size_t c = table.column_names.size(); c-- > 0;)
      if (table.kinds[c] == FeatureKind::nominal) {
        target_col = c;
        break;
      }
    if (target_col == table.column_names.size())
      throw DataError("arff: no nominal attribute to use as target");
  }
  return detail::build_dataset(table, target_col, positive_label);
}

}  // namespace irtpart

#endif
