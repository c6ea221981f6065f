// Copyright 2026 The clocksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clocksim/errors.h"
#include "clocksim/io.h"
#include "clocksim/rtm.h"

namespace clocksim {

ParseError::ParseError(size_t line, size_t column, const std::string &message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {
}

namespace {

struct Token {
    std::string text;
    size_t column;  // 1-based
    bool punct;
};

bool is_punct(char ch) {
    return ch == '(' || ch == ')' || ch == ',' || ch == ':';
}

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            i++;
        } else if (is_punct(ch)) {
            out.push_back({std::string(1, ch), i + 1, true});
            i++;
        } else {
            size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && !is_punct(line[i])) {
                i++;
            }
            out.push_back({std::string(line.substr(start, i - start)), start + 1, false});
        }
    }
    return out;
}

struct Located {
    std::string text;
    size_t line;
    size_t column;
};

struct RawMove {
    Located from, to, dir;
};

struct RawRw {
    Located from, read, to, write;
};

class LineCursor {
   public:
    LineCursor(std::vector<Token> tokens, size_t line, size_t line_length)
        : tokens_(std::move(tokens)), line_(line), end_column_(line_length + 1) {
    }

    bool done() const {
        return pos_ >= tokens_.size();
    }

    [[noreturn]] void fail(const std::string &message) const {
        size_t col = done() ? end_column_ : tokens_[pos_].column;
        throw ParseError(line_, col, message);
    }

    Located word(const char *what) {
        if (done() || tokens_[pos_].punct) {
            fail(std::string("expected ") + what);
        }
        const Token &t = tokens_[pos_++];
        return {t.text, line_, t.column};
    }

    void expect(const char *text) {
        if (done() || tokens_[pos_].text != text) {
            fail(std::string("expected '") + text + "'");
        }
        pos_++;
    }

    void expect_end() {
        if (!done()) {
            fail("unexpected '" + tokens_[pos_].text + "'");
        }
    }

   private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    size_t line_;
    size_t end_column_;
};

uint32_t parse_positive(const Located &tok, const char *what) {
    size_t used = 0;
    unsigned long value = 0;
    try {
        value = std::stoul(tok.text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != tok.text.size() || value == 0 || value > 0xFFFFFFFFul) {
        throw ParseError(tok.line, tok.column, std::string(what) + " must be a positive integer");
    }
    return static_cast<uint32_t>(value);
}

}  // namespace

RtmSpec parse_rtm_spec(std::string_view text) {
    std::vector<StateDecl> states;
    std::vector<std::string> alphabet;
    std::optional<Located> initial;
    std::optional<uint32_t> tape_cells;
    std::optional<Located> tape_cells_token;
    std::optional<Located> result_cell_token;
    uint32_t result_cell = 1;
    std::vector<RawMove> moves;
    std::vector<RawRw> rws;
    std::vector<bool> is_move_in_order;
    bool saw_states = false;
    bool saw_alphabet = false;

    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        LineCursor cur(tokenize(line), line_no, line.size());
        if (cur.done()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        Located key = cur.word("a directive");
        cur.expect(":");
        if (key.text == "states") {
            if (saw_states) {
                throw ParseError(key.line, key.column, "duplicate 'states' directive");
            }
            saw_states = true;
            while (!cur.done()) {
                Located name = cur.word("a state name");
                cur.expect(":");
                Located kind = cur.word("a state kind");
                StateKind k;
                if (kind.text == "rw") {
                    k = StateKind::ReadWrite;
                } else if (kind.text == "right") {
                    k = StateKind::MoveRight;
                } else if (kind.text == "left") {
                    k = StateKind::MoveLeft;
                } else if (kind.text == "final") {
                    k = StateKind::Final;
                } else {
                    throw ParseError(kind.line, kind.column, "unknown state kind '" + kind.text + "'");
                }
                for (const auto &s : states) {
                    if (s.name == name.text) {
                        throw ParseError(name.line, name.column, "duplicate state '" + name.text + "'");
                    }
                }
                states.push_back({name.text, k});
            }
            if (states.empty()) {
                cur.fail("expected at least one state");
            }
        } else if (key.text == "alphabet") {
            if (saw_alphabet) {
                throw ParseError(key.line, key.column, "duplicate 'alphabet' directive");
            }
            saw_alphabet = true;
            while (!cur.done()) {
                Located sym = cur.word("a symbol");
                for (const auto &s : alphabet) {
                    if (s == sym.text) {
                        throw ParseError(sym.line, sym.column, "duplicate symbol '" + sym.text + "'");
                    }
                }
                alphabet.push_back(sym.text);
            }
            if (alphabet.empty()) {
                cur.fail("expected at least one symbol");
            }
        } else if (key.text == "initial") {
            if (initial) {
                throw ParseError(key.line, key.column, "duplicate 'initial' directive");
            }
            initial = cur.word("a state name");
            cur.expect_end();
        } else if (key.text == "tape_cells") {
            if (tape_cells) {
                throw ParseError(key.line, key.column, "duplicate 'tape_cells' directive");
            }
            tape_cells_token = cur.word("a cell count");
            tape_cells = parse_positive(*tape_cells_token, "tape_cells");
            cur.expect_end();
        } else if (key.text == "result_cell") {
            if (result_cell_token) {
                throw ParseError(key.line, key.column, "duplicate 'result_cell' directive");
            }
            result_cell_token = cur.word("a cell index");
            result_cell = parse_positive(*result_cell_token, "result_cell");
            cur.expect_end();
        } else if (key.text == "transition") {
            Located form = cur.word("'move' or 'rw'");
            if (form.text == "move") {
                RawMove mv;
                mv.from = cur.word("a state name");
                cur.expect("->");
                mv.to = cur.word("a state name");
                mv.dir = cur.word("+1 or -1");
                if (mv.dir.text != "+1" && mv.dir.text != "-1") {
                    throw ParseError(mv.dir.line, mv.dir.column, "move direction must be +1 or -1");
                }
                cur.expect_end();
                moves.push_back(std::move(mv));
                is_move_in_order.push_back(true);
            } else if (form.text == "rw") {
                RawRw rw;
                cur.expect("(");
                rw.from = cur.word("a state name");
                cur.expect(",");
                rw.read = cur.word("a symbol");
                cur.expect(")");
                cur.expect("->");
                cur.expect("(");
                rw.to = cur.word("a state name");
                cur.expect(",");
                rw.write = cur.word("a symbol");
                cur.expect(")");
                cur.expect_end();
                rws.push_back(std::move(rw));
                is_move_in_order.push_back(false);
            } else {
                throw ParseError(form.line, form.column, "unknown transition form '" + form.text + "'");
            }
        } else {
            throw ParseError(key.line, key.column, "unknown directive '" + key.text + "'");
        }
        if (end == text.size()) {
            break;
        }
    }

    if (!saw_states) {
        throw ParseError(line_no, 1, "missing 'states' directive");
    }
    if (!saw_alphabet) {
        alphabet = {"0", "1"};
    }
    uint32_t n = tape_cells.value_or(1);
    if (result_cell > n) {
        throw ParseError(
            result_cell_token->line, result_cell_token->column, "result_cell exceeds tape_cells (" + std::to_string(n) + ")");
    }

    auto find_state = [&](const Located &tok) -> StateId {
        for (size_t k = 0; k < states.size(); k++) {
            if (states[k].name == tok.text) {
                return static_cast<StateId>(k);
            }
        }
        throw ParseError(tok.line, tok.column, "unknown state '" + tok.text + "'");
    };
    auto find_symbol = [&](const Located &tok) -> Symbol {
        for (size_t k = 0; k < alphabet.size(); k++) {
            if (alphabet[k] == tok.text) {
                return static_cast<Symbol>(k);
            }
        }
        throw ParseError(tok.line, tok.column, "unknown symbol '" + tok.text + "'");
    };

    std::vector<Transition> transitions;
    std::vector<bool> move_seen(states.size(), false);
    std::vector<bool> rw_seen(states.size() * alphabet.size(), false);
    size_t mi = 0;
    size_t ri = 0;
    for (bool is_move : is_move_in_order) {
        if (is_move) {
            const RawMove &raw = moves[mi++];
            StateId from = find_state(raw.from);
            StateId to = find_state(raw.to);
            int dir = raw.dir.text == "+1" ? +1 : -1;
            StateKind expected = dir > 0 ? StateKind::MoveRight : StateKind::MoveLeft;
            if (states[from].kind != expected) {
                throw ParseError(
                    raw.from.line,
                    raw.from.column,
                    "kind mismatch: '" + raw.from.text + "' is declared " +
                        std::string(state_kind_name(states[from].kind)) + " but used in a " +
                        std::string(state_kind_name(expected)) + " move");
            }
            if (move_seen[from]) {
                throw ParseError(raw.from.line, raw.from.column, "duplicate transition for '" + raw.from.text + "'");
            }
            move_seen[from] = true;
            transitions.emplace_back(MoveRule{from, to, dir});
        } else {
            const RawRw &raw = rws[ri++];
            StateId from = find_state(raw.from);
            Symbol read = find_symbol(raw.read);
            StateId to = find_state(raw.to);
            Symbol write = find_symbol(raw.write);
            if (states[from].kind != StateKind::ReadWrite) {
                throw ParseError(
                    raw.from.line,
                    raw.from.column,
                    "kind mismatch: '" + raw.from.text + "' is declared " +
                        std::string(state_kind_name(states[from].kind)) + " but used in a read-write rule");
            }
            size_t slot = from * alphabet.size() + read;
            if (rw_seen[slot]) {
                throw ParseError(
                    raw.from.line,
                    raw.from.column,
                    "duplicate transition for ('" + raw.from.text + "', '" + raw.read.text + "')");
            }
            rw_seen[slot] = true;
            transitions.emplace_back(ReadWriteRule{from, read, to, write});
        }
    }

    StateId init = initial ? find_state(*initial) : 0;
    return RtmSpec(std::move(states), std::move(alphabet), std::move(transitions), init, n, result_cell);
}

RtmSpec load_rtm_spec(const std::string &path) {
    return parse_rtm_spec(read_text_file(path));
}

}  // namespace clocksim
