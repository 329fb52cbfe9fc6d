#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace narrclass::prompt {

enum class TemplateName { Step1, Step2, Step3, Datagen, Explain };

// Template bodies are fixed; placeholders are {identifier}.
std::string_view template_body(TemplateName name);

class PromptError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// Single pass over `body`: each {identifier} is replaced by its binding and the
// substituted text is never rescanned. Throws PromptError on an unbound
// placeholder.
std::string substitute(std::string_view body, const Bindings& bindings);

using NamedExplanation = std::pair<std::string, std::string>;

// "- name: explanation" per entry, newline-separated, no trailing newline.
std::string render_list(const std::vector<NamedExplanation>& items);

std::string render_step1(std::string_view document_text);
std::string render_step2(std::string_view category, const std::vector<NamedExplanation>& narratives,
                         std::string_view document_text);
std::string render_step3(std::string_view category, std::string_view main_narrative,
                         const std::vector<NamedExplanation>& subnarratives,
                         std::string_view document_text);
std::string render_datagen(std::string_view category, std::string_view sub_narrative,
                           std::string_view explanation);
std::string render_explain(const std::vector<std::string>& main_narratives,
                           const std::vector<std::string>& sub_narratives);

}  // namespace narrclass::prompt
