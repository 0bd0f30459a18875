#include "newsgraph/segment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// The whitespace-delimited word ending at the dot at position i, with any
// leading non-alphanumeric characters (quotes, parentheses) removed.
std::string word_ending_at(const std::string& text, std::size_t i) {
    std::size_t b = i;
    while (b > 0 && !is_space(text[b - 1])) --b;
    while (b <= i && !is_alnum(text[b])) ++b;
    if (b > i) return {};
    return text.substr(b, i - b + 1);
}

}  // namespace

const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> list = {
        "Dr.", "Mr.", "Mrs.", "Ms.", "U.S.", "U.K.", "St.", "Inc.", "Co.",
        "Jr.", "Sr.", "vs.", "e.g.", "i.e.", "Gov.", "Sen.", "Rep.",
    };
    return list;
}

std::vector<std::string> load_abbreviations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open abbreviation file: " + path);
    std::vector<std::string> list;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) list.push_back(line);
    }
    return list;
}

std::vector<Sentence> split_sentences(const std::string& text, const std::string& article_id) {
    return split_sentences(text, article_id, default_abbreviations());
}

std::vector<Sentence> split_sentences(const std::string& text, const std::string& article_id,
                                      const std::vector<std::string>& abbreviations) {
    std::vector<Sentence> sentences;
    auto emit = [&](std::size_t begin, std::size_t end) {
        std::string s = trim(text.substr(begin, end - begin));
        if (s.empty()) return;
        Sentence sent;
        sent.text = std::move(s);
        sent.index = sentences.size();
        sent.article_id = article_id;
        sentences.push_back(std::move(sent));
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;

        std::size_t next = i + 1;
        while (next < text.size() && is_space(text[next])) ++next;
        const bool at_end = next == text.size();
        if (!at_end && (next == i + 1 || !is_upper(text[next]))) continue;

        if (c == '.') {
            const std::string word = word_ending_at(text, i);
            if (std::find(abbreviations.begin(), abbreviations.end(), word) !=
                abbreviations.end()) {
                continue;
            }
        }
        emit(start, i + 1);
        start = next;
        i = next - 1;
    }
    emit(start, text.size());
    return sentences;
}

TokenSequence tokenize(const std::string& text) {
    TokenSequence tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t b = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i == b) break;

        std::size_t tb = b, te = i;
        while (tb < te && is_punct(text[tb])) ++tb;
        while (te > tb && is_punct(text[te - 1])) --te;
        if (tb == te) continue;

        std::string token = text.substr(tb, te - tb);
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::unordered_map<std::string, int> ngram_counts(const TokenSequence& tokens, int n) {
    if (n < 1) throw Error("ngram_counts: n must be >= 1");
    std::unordered_map<std::string, int> counts;
    if (tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (int k = 1; k < n; ++k) {
            gram += '\x1f';
            gram += tokens[i + k];
        }
        ++counts[gram];
    }
    return counts;
}

std::size_t ngram_total(const TokenSequence& tokens, int n) {
    if (n < 1) throw Error("ngram_total: n must be >= 1");
    if (tokens.size() < static_cast<std::size_t>(n)) return 0;
    return tokens.size() - n + 1;
}

}  // namespace newsgraph
