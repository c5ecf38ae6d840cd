#include "imprint/biblio_ingest.hpp"

namespace imprint::biblio {

// English function words plus a few generic research-title words.
const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words{
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "among", "amongst",
      "an", "and", "any", "are", "as", "at", "based", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "case", "could", "did", "do", "does",
      "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
      "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most", "my", "myself",
      "new", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our",
      "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so", "some", "studies",
      "study", "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too", "toward", "towards",
      "under", "until", "up", "upon", "use", "used", "using", "versus", "very", "via", "vs", "was",
      "we", "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
      "with", "within", "without", "would", "you", "your", "yours", "yourself", "yourselves",
  };
  return words;
}

}  // namespace imprint::biblio
