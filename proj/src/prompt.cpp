#include "narrclass/prompt.hpp"

#include "narrclass/text.hpp"

namespace narrclass::prompt {
namespace {

constexpr std::string_view kStep1 =
    R"(Given the following document text, classify it into one of the two categories: "Ukraine-Russia War" or "Climate Change".

Document Text: {document_text}

Determine the category that closely or partially fits the document. If neither category applies, return "Other". Return only the output, without any additional explanations or text.)";

constexpr std::string_view kStep2 =
    R"(The document text given below is related to "{category}".
Please classify the document text into the most relevant narratives. Below is a list of narratives along with their explanations:

{narratives_list_with_explanations}

Document Text: {document_text}

Return the most relevant narratives as a hash-separated string (e.g., Narrative1#Narrative2..). If no specific narrative can be assigned, just return "Other" and nothing else. Return only the output, without any additional explanations or text.)";

constexpr std::string_view kStep3 =
    R"(The document text given below is related to "{category}" and its main narrative is: "{main_narrative}".
Please classify the document text into the most relevant sub-narratives. Below is a list of sub-narratives along with their explanations:

{sub_narratives_list_with_explanations}

Document Text: {document_text}

Return the most relevant sub-narratives as a hash-separated string (e.g., Sub-narrative1#Sub-narrative2..). If no specific sub-narrative can be assigned, just return "Other" and nothing else. Return only the output, without any additional explanations or text.)";

constexpr std::string_view kDatagen =
    R"(You are an AI news curator. Generate 5 different news articles related to the following topic on {category}.

Topic: {sub_narrative}
Explanation: {explanation}

Each article should be between 400-500 words and explore a unique aspect, perspective, or event related to this topic. Focus on delivering informative, coherent, and engaging articles that reflect diverse points of view or angles on the given topic. Avoid redundancy by ensuring that each article highlights a different aspect or argument related to the context provided. The output format should look like this:
Article 1:
Article 2:
Article 3:
Article 4:
Article 5:)";

constexpr std::string_view kExplain =
    R"(You are given main narratives and sub-narratives for the Ukraine-Russia War and Climate Change. Now, provide a concise explanation for each main narrative and its sub-narratives.

{main_narratives}
{sub_narratives})";

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

void require_non_empty(std::string_view value, const char* what) {
  if (text::trim(value).empty()) throw PromptError(std::string(what) + " must not be empty");
}

std::string bullet_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += '\n';
    out += "- " + names[i];
  }
  return out;
}

}  // namespace

std::string_view template_body(TemplateName name) {
  switch (name) {
    case TemplateName::Step1: return kStep1;
    case TemplateName::Step2: return kStep2;
    case TemplateName::Step3: return kStep3;
    case TemplateName::Datagen: return kDatagen;
    case TemplateName::Explain: return kExplain;
  }
  return {};
}

std::string substitute(std::string_view body, const Bindings& bindings) {
  std::string out;
  out.reserve(body.size());
  std::size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '{') {
      std::size_t j = i + 1;
      while (j < body.size() && is_ident_char(body[j])) ++j;
      if (j < body.size() && body[j] == '}' && j > i + 1) {
        auto key = body.substr(i + 1, j - i - 1);
        auto it = bindings.find(key);
        if (it == bindings.end()) {
          throw PromptError("unbound placeholder {" + std::string(key) + "}");
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += body[i++];
  }
  return out;
}

std::string render_list(const std::vector<NamedExplanation>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += '\n';
    out += "- " + items[i].first + ": " + items[i].second;
  }
  return out;
}

std::string render_step1(std::string_view document_text) {
  require_non_empty(document_text, "document text");
  return substitute(kStep1, {{"document_text", std::string(document_text)}});
}

std::string render_step2(std::string_view category, const std::vector<NamedExplanation>& narratives,
                         std::string_view document_text) {
  require_non_empty(category, "category");
  require_non_empty(document_text, "document text");
  if (narratives.empty()) throw PromptError("narrative list must not be empty");
  return substitute(kStep2, {{"category", std::string(category)},
                             {"narratives_list_with_explanations", render_list(narratives)},
                             {"document_text", std::string(document_text)}});
}

std::string render_step3(std::string_view category, std::string_view main_narrative,
                         const std::vector<NamedExplanation>& subnarratives,
                         std::string_view document_text) {
  require_non_empty(category, "category");
  require_non_empty(main_narrative, "main narrative");
  require_non_empty(document_text, "document text");
  if (subnarratives.empty()) throw PromptError("sub-narrative list must not be empty");
  return substitute(kStep3, {{"category", std::string(category)},
                             {"main_narrative", std::string(main_narrative)},
                             {"sub_narratives_list_with_explanations", render_list(subnarratives)},
                             {"document_text", std::string(document_text)}});
}

std::string render_datagen(std::string_view category, std::string_view sub_narrative,
                           std::string_view explanation) {
  require_non_empty(category, "category");
  require_non_empty(sub_narrative, "sub-narrative");
  require_non_empty(explanation, "explanation");
  return substitute(kDatagen, {{"category", std::string(category)},
                               {"sub_narrative", std::string(sub_narrative)},
                               {"explanation", std::string(explanation)}});
}

std::string render_explain(const std::vector<std::string>& main_narratives,
                           const std::vector<std::string>& sub_narratives) {
  if (main_narratives.empty()) throw PromptError("main narrative list must not be empty");
  if (sub_narratives.empty()) throw PromptError("sub-narrative list must not be empty");
  return substitute(kExplain, {{"main_narratives", bullet_names(main_narratives)},
                               {"sub_narratives", bullet_names(sub_narratives)}});
}

}  // namespace narrclass::prompt
