#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spargen/tasks.hpp"
#include "spargen/util.hpp"

namespace spargen {

struct Template {
    std::string family;
    QaType qa_type = QaType::Fill;
    std::string text;
    std::string answer_text;  // sentence templates only
};

class TemplateBank {
public:
    /// Load from the JSON bank; every (family, qa_type) pair must carry at
    /// least three paraphrases or loading fails.
    static TemplateBank load(const std::filesystem::path& path);
    static const std::filesystem::path& default_path();

    const std::vector<Template>& get(const std::string& family, QaType type) const;
    bool has(const std::string& family, QaType type) const;
    uint64_t content_hash() const { return content_hash_; }

private:
    std::map<std::pair<std::string, QaType>, std::vector<Template>> by_key_;
    uint64_t content_hash_ = 0;
};

using BindingMap = std::map<std::string, std::string>;

/// Replace every [placeholder] in `text` from `bindings`. Throws
/// MissingBinding when a placeholder has no entry. Bindings may be empty
/// strings (used to drop optional clauses).
std::string fill_placeholders(const std::string& text, const BindingMap& bindings);

}  // namespace spargen
