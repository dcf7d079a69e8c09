#include "tagrank/pos_select.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tagrank {

std::vector<std::string> words_of(const Sentence& sentence) {
    std::vector<std::string> out;
    out.reserve(sentence.size());
    for (const auto& w : sentence) out.push_back(w.surface);
    return out;
}

std::size_t TreeAssignment::total() const {
    std::size_t n = 0;
    for (const auto& c : candidates) n += c.size();
    return n;
}

TreeAssignment select_trees(const Grammar& grammar, const Sentence& sentence, const SelectOptions& options) {
    TreeAssignment out;
    out.candidates.reserve(sentence.size());
    for (const auto& word : sentence) {
        std::set<std::string> names;
        const bool unknown = !grammar.knows_word(word.surface);
        for (const auto& tag : word.tags) {
            auto selected = unknown && options.open_class_fallback ? grammar.trees_anchored_by(tag)
                                                                   : grammar.trees_for_word(word.surface, tag);
            names.insert(selected.begin(), selected.end());
        }
        out.candidates.emplace_back(names.begin(), names.end());
    }
    return out;
}

TreeAssignment select_trees_untagged(const Grammar& grammar, const std::vector<std::string>& words) {
    TreeAssignment out;
    for (const auto& w : words) {
        std::set<std::string> names;
        for (const auto& pos : grammar.pos_for_word(w)) {
            auto selected = grammar.trees_for_word(w, pos);
            names.insert(selected.begin(), selected.end());
        }
        out.candidates.emplace_back(names.begin(), names.end());
    }
    return out;
}

Sentence parse_tagged_sentence(const std::string& line) {
    Sentence out;
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
        auto slash = token.rfind('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == token.size())
            throw std::runtime_error("token '" + token + "' is not of the form word/TAG");
        TaggedWord w{token.substr(0, slash), {}};
        std::string tags = token.substr(slash + 1);
        std::size_t pos = 0;
        while (pos <= tags.size()) {
            auto bar = tags.find('|', pos);
            std::string tag = tags.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
            if (tag.empty()) throw std::runtime_error("empty tag in token '" + token + "'");
            if (std::find(w.tags.begin(), w.tags.end(), tag) != w.tags.end())
                throw std::runtime_error("duplicate tag in token '" + token + "'");
            w.tags.push_back(tag);
            if (bar == std::string::npos) break;
            pos = bar + 1;
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::string format_tagged_sentence(const Sentence& sentence) {
    std::string out;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (i) out += ' ';
        out += sentence[i].surface + '/';
        for (std::size_t t = 0; t < sentence[i].tags.size(); ++t) {
            if (t) out += '|';
            out += sentence[i].tags[t];
        }
    }
    return out;
}

std::vector<Sentence> read_tagged_corpus(std::istream& in) {
    std::vector<Sentence> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_tagged_sentence(line));
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace tagrank
