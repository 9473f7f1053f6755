#include "spargen/templates.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace spargen {

using nlohmann::json;

TemplateBank TemplateBank::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open template bank " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    json root = json::parse(content, nullptr, false);
    if (root.is_discarded()) throw ParseError("malformed JSON in " + path.string());

    TemplateBank bank;
    bank.content_hash_ = fnv1a64(content);
    if (!root.contains("templates") || !root["templates"].is_array())
        throw ValidationError(path.string() + ": missing templates array");

    for (const auto& tj : root["templates"]) {
        Template t;
        t.family = tj.at("family").get<std::string>();
        const auto type = qa_type_from_string(tj.at("qa_type").get<std::string>());
        if (!type)
            throw ValidationError(path.string() + ": unknown qa_type in family " + t.family);
        t.qa_type = *type;
        t.text = tj.at("text").get<std::string>();
        t.answer_text = tj.value("answer", "");
        if (t.qa_type == QaType::Sentence && t.answer_text.empty())
            throw ValidationError(path.string() + ": sentence template without answer in " +
                                  t.family);
        bank.by_key_[{t.family, t.qa_type}].push_back(std::move(t));
    }

    for (const auto& [key, templates] : bank.by_key_)
        if (templates.size() < 3)
            throw ValidationError(path.string() + ": family " + key.first + "/" +
                                  to_string(key.second) + " has " +
                                  std::to_string(templates.size()) +
                                  " templates, need at least 3");
    return bank;
}

const std::filesystem::path& TemplateBank::default_path() {
    static const std::filesystem::path path = SPARGEN_TEMPLATE_FILE;
    return path;
}

const std::vector<Template>& TemplateBank::get(const std::string& family, QaType type) const {
    auto it = by_key_.find({family, type});
    if (it == by_key_.end())
        throw ValidationError("no templates for " + family + "/" + to_string(type));
    return it->second;
}

bool TemplateBank::has(const std::string& family, QaType type) const {
    return by_key_.count({family, type}) > 0;
}

std::string fill_placeholders(const std::string& text, const BindingMap& bindings) {
    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        const size_t open = text.find('[', pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        const size_t close = text.find(']', open);
        if (close == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const std::string key = text.substr(open + 1, close - open - 1);
        auto it = bindings.find(key);
        if (it == bindings.end()) throw MissingBinding(key);
        out += it->second;
        pos = close + 1;
    }
    return out;
}

}  // namespace spargen
