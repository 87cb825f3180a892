#include "fptmc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fptmc/errors.hpp"

namespace fptmc {

namespace {

struct Line {
    std::string_view text;  // comment stripped
    std::size_t number = 0;
};

// Comment-stripped, non-blank lines with their 1-based numbers.
std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        ++number;
        std::string_view line = text.substr(pos, eol - pos);
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            lines.push_back(Line{line, number});
        }
        if (eol == text.size()) {
            break;
        }
        pos = eol + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    const std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_label(std::string_view label) {
    if (label.empty()) {
        return false;
    }
    return label.find_first_of(" \t\r:,=#") == std::string_view::npos;
}

std::uint64_t parse_count(std::string_view token, std::size_t line, std::size_t column) {
    token = trim(token);
    std::uint64_t value = 0;
    const char* const last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), last, value);
    if (token.empty() || ec != std::errc() || ptr != last) {
        throw ParseError(line, column, "expected a nonnegative integer, got '" +
                                           std::string(token) + "'");
    }
    return value;
}

// 1-based column of a subview inside its line.
std::size_t column_of(std::string_view line, std::string_view part) {
    return static_cast<std::size_t>(part.data() - line.data()) + 1;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

}  // namespace

std::vector<std::string> validate_stage_table(const StageTable& stages) {
    std::vector<std::string> violations;
    if (stages.stages.empty()) {
        violations.push_back("stage table has no stages");
        return violations;
    }
    for (std::size_t i = 0; i < stages.stages.size(); ++i) {
        const StageRecord& s = stages.stages[i];
        if (s.graduation + s.death + s.stay != s.total) {
            violations.push_back("stage " + std::to_string(i) + " (" + s.label + "): counts " +
                                 std::to_string(s.graduation) + "+" + std::to_string(s.death) +
                                 "+" + std::to_string(s.stay) + " do not sum to n=" +
                                 std::to_string(s.total));
        }
        if (s.total == 0) {
            violations.push_back("stage " + std::to_string(i) + " (" + s.label +
                                 ") has no observed transitions");
        }
    }
    if (stages.stages.back().graduation != 0) {
        violations.push_back("final stage (" + stages.stages.back().label +
                             ") has graduation count " +
                             std::to_string(stages.stages.back().graduation) +
                             "; there is no next stage");
    }
    return violations;
}

TransitionCountTable stage_table_to_counts(const StageTable& stages) {
    std::vector<std::string> violations = validate_stage_table(stages);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }

    const std::size_t k = stages.stages.size();
    TransitionCountTable table;
    table.state_labels.reserve(k);
    table.counts.assign(k, std::vector<std::uint64_t>(k + 1, 0));
    for (std::size_t i = 0; i < k; ++i) {
        const StageRecord& s = stages.stages[i];
        table.state_labels.push_back(s.label);
        table.counts[i][i] = s.stay;
        if (i + 1 < k) {
            table.counts[i][i + 1] = s.graduation;
        }
        table.counts[i][k] = s.death;
    }

    violations = validate_table(table);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return table;
}

StageTable parse_stage_table(std::string_view text) {
    StageTable stages;
    for (const Line& line : significant_lines(text)) {
        std::vector<std::string_view> tokens;
        for (std::string_view part : split(line.text, ' ')) {
            for (std::string_view tok : split(part, '\t')) {
                tok = trim(tok);
                if (!tok.empty()) {
                    tokens.push_back(tok);
                }
            }
        }
        if (tokens.size() != 5) {
            throw ParseError(line.number, 1,
                             "expected 'label G R P n', got " + std::to_string(tokens.size()) +
                                 " fields");
        }
        if (!valid_label(tokens[0])) {
            throw ParseError(line.number, column_of(line.text, tokens[0]),
                             "invalid stage label '" + std::string(tokens[0]) + "'");
        }
        for (const StageRecord& seen : stages.stages) {
            if (seen.label == tokens[0]) {
                throw ParseError(line.number, column_of(line.text, tokens[0]),
                                 "duplicate stage '" + std::string(tokens[0]) + "'");
            }
        }
        StageRecord record;
        record.label = std::string(tokens[0]);
        record.graduation = parse_count(tokens[1], line.number, column_of(line.text, tokens[1]));
        record.death = parse_count(tokens[2], line.number, column_of(line.text, tokens[2]));
        record.stay = parse_count(tokens[3], line.number, column_of(line.text, tokens[3]));
        record.total = parse_count(tokens[4], line.number, column_of(line.text, tokens[4]));
        stages.stages.push_back(std::move(record));
    }
    if (stages.stages.empty()) {
        throw ParseError(1, 1, "no stages found");
    }
    if (auto violations = validate_stage_table(stages); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return stages;
}

TransitionCountTable parse_counts(std::string_view text) {
    const std::vector<Line> lines = significant_lines(text);
    if (lines.empty()) {
        throw ParseError(1, 1, "no states found");
    }

    std::size_t first_row = 0;
    std::vector<std::string> labels;
    const bool has_header = trim(lines[0].text).substr(0, 7) == "states:";
    if (has_header) {
        const std::string_view rest = trim(lines[0].text).substr(7);
        for (std::string_view tok : split(rest, ' ')) {
            tok = trim(tok);
            if (tok.empty()) {
                continue;
            }
            if (!valid_label(tok)) {
                throw ParseError(lines[0].number, column_of(lines[0].text, tok),
                                 "invalid state label '" + std::string(tok) + "'");
            }
            if (std::find(labels.begin(), labels.end(), tok) != labels.end()) {
                throw ParseError(lines[0].number, column_of(lines[0].text, tok),
                                 "duplicate state '" + std::string(tok) + "'");
            }
            labels.emplace_back(tok);
        }
        if (labels.empty()) {
            throw ParseError(lines[0].number, 1, "states: header names no states");
        }
        first_row = 1;
    } else {
        // Without a header the states are the row labels in file order.
        for (std::size_t r = 0; r < lines.size(); ++r) {
            const std::size_t colon = lines[r].text.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError(lines[r].number, 1, "expected 'label: ...'");
            }
            const std::string_view label = trim(lines[r].text.substr(0, colon));
            if (!valid_label(label)) {
                throw ParseError(lines[r].number, 1,
                                 "invalid state label '" + std::string(label) + "'");
            }
            if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
                throw ParseError(lines[r].number, 1,
                                 "duplicate row for state '" + std::string(label) + "'");
            }
            labels.emplace_back(label);
        }
    }

    const std::size_t k = labels.size();
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < k; ++i) {
        index.emplace(labels[i], i);
    }

    TransitionCountTable table;
    table.state_labels = labels;
    table.counts.assign(k, std::vector<std::uint64_t>(k + 1, 0));
    std::vector<std::string> violations;
    std::vector<char> row_seen(k, 0);

    for (std::size_t r = first_row; r < lines.size(); ++r) {
        const Line& line = lines[r];
        const std::size_t colon = line.text.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(line.number, 1, "expected 'label: ...'");
        }
        const std::string_view label = trim(line.text.substr(0, colon));
        const auto found = index.find(label);
        if (found == index.end()) {
            throw ParseError(line.number, 1,
                             "state '" + std::string(label) + "' is not in the states: header");
        }
        const std::size_t row = found->second;
        if (row_seen[row]) {
            throw ParseError(line.number, 1,
                             "duplicate row for state '" + std::string(label) + "'");
        }
        row_seen[row] = 1;

        bool has_declared_total = false;
        std::uint64_t declared_total = 0;
        std::vector<char> key_seen(k + 1, 0);
        for (std::string_view entry : split(line.text.substr(colon + 1), ',')) {
            entry = trim(entry);
            if (entry.empty()) {
                continue;
            }
            const std::size_t col = column_of(line.text, entry);
            const std::size_t eq = entry.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(line.number, col, "expected key=value, got '" +
                                                       std::string(entry) + "'");
            }
            const std::string_view key = trim(entry.substr(0, eq));
            const std::uint64_t value = parse_count(entry.substr(eq + 1), line.number, col);
            if (key == "absorb") {
                if (key_seen[k]) {
                    throw ParseError(line.number, col, "duplicate absorb entry");
                }
                key_seen[k] = 1;
                table.counts[row][k] = value;
            } else if (key == "n") {
                if (has_declared_total) {
                    throw ParseError(line.number, col, "duplicate n entry");
                }
                has_declared_total = true;
                declared_total = value;
            } else if (key.substr(0, 3) == "to_") {
                const auto dest = index.find(key.substr(3));
                if (dest == index.end()) {
                    throw ParseError(line.number, col, "unknown destination state '" +
                                                           std::string(key.substr(3)) + "'");
                }
                if (key_seen[dest->second]) {
                    throw ParseError(line.number, col,
                                     "duplicate entry for '" + std::string(key) + "'");
                }
                key_seen[dest->second] = 1;
                table.counts[row][dest->second] = value;
            } else {
                throw ParseError(line.number, col, "unknown key '" + std::string(key) + "'");
            }
        }
        if (has_declared_total && table.row_total(row) != declared_total) {
            violations.push_back("row " + std::string(label) + ": counts sum to " +
                                 std::to_string(table.row_total(row)) + " but n=" +
                                 std::to_string(declared_total) + " was declared");
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        if (!row_seen[i]) {
            throw ParseError(lines[0].number, 1, "missing row for state '" + labels[i] + "'");
        }
    }

    for (std::string& v : validate_table(table)) {
        violations.push_back(std::move(v));
    }
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return table;
}

std::string write_counts(const TransitionCountTable& table) {
    const std::size_t k = table.size();
    for (const std::string& label : table.state_labels) {
        if (!valid_label(label)) {
            throw std::invalid_argument("state label '" + label + "' cannot be written");
        }
    }
    std::string out = "states:";
    for (const std::string& label : table.state_labels) {
        out += ' ';
        out += label;
    }
    out += '\n';
    for (std::size_t i = 0; i < k; ++i) {
        out += table.state_labels[i];
        out += ':';
        for (std::size_t j = 0; j < k; ++j) {
            out += j == 0 ? " " : ", ";
            out += "to_" + table.state_labels[j] + "=" + std::to_string(table.counts[i][j]);
        }
        out += ", absorb=" + std::to_string(table.counts[i][k]);
        out += '\n';
    }
    return out;
}

}  // namespace fptmc
