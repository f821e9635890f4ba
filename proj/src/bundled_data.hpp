#pragma once

#include <string_view>

namespace spkl::detail {

std::string_view bundled_stopwords_en();
std::string_view bundled_stopwords_custom();
std::string_view bundled_lemma_exceptions();

}  // namespace spkl::detail
