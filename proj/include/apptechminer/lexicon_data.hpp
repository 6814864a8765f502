#pragma once

// Bundled word lists backing the default POS lexicon and stopword set.
// Fully overridable via the lexicon/stopword file formats.

namespace atm::detail {

// Function words, pronouns, auxiliaries and high-frequency verbs. Tagged
// OTHER so they terminate noun-phrase runs.
inline constexpr const char* kOtherWords[] = {
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "each",
    "every", "all", "both", "few", "many", "much", "more", "most", "several",
    "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too",
    "very", "just", "also", "then", "once", "here", "there", "when", "where",
    "why", "how", "what", "which", "who", "whom", "whose", "and", "but", "or",
    "if", "while", "because", "as", "until", "although", "though", "since",
    "unless", "whereas",
    "of", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again",
    "further", "via", "within", "without", "towards", "toward", "upon",
    "among", "across", "per", "around",
    "i", "me", "my", "we", "us", "our", "ours", "you", "your", "yours", "he",
    "him", "his", "she", "her", "hers", "it", "its", "they", "them", "their",
    "theirs", "itself", "themselves", "one", "ones",
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "will", "would", "shall",
    "should", "can", "could", "may", "might", "must", "ought", "need",
    "use", "used", "uses", "using", "show", "shows", "showed", "shown",
    "propose", "proposes", "proposed", "present", "presents", "presented",
    "describe", "describes", "described", "introduce", "introduces",
    "introduced", "apply", "applies", "applied", "applying", "report",
    "reports", "reported", "evaluate", "evaluates", "evaluated", "train",
    "trains", "trained", "test", "tests", "tested", "obtain", "obtains",
    "obtained", "achieve", "achieves", "achieved", "improve", "improves",
    "improved", "perform", "performs", "performed", "compare", "compares",
    "compared", "follow", "follows", "followed", "employ", "employs",
    "employed", "build", "builds", "built", "run", "runs", "ran", "running",
    "see", "seen", "observe", "observed", "note", "noted", "consider",
    "considered", "demonstrate", "demonstrates", "demonstrated", "implement",
    "implemented", "denote", "denotes", "define", "defines", "defined",
    "assume", "assumes", "assumed", "take", "takes", "taken", "give",
    "gives", "given", "make", "makes", "made", "provide", "provides",
    "provided", "yield", "yields", "based", "study", "studies", "studied",
    "work", "works",
};

// Common pre-nominal adjectives in scientific prose.
inline constexpr const char* kAdjWords[] = {
    "statistical", "neural", "syntactic", "semantic", "lexical",
    "probabilistic", "minimum", "maximum", "minimal", "maximal", "robust",
    "novel", "large", "small", "automatic", "automated", "unsupervised",
    "supervised", "semisupervised", "bilingual", "multilingual",
    "monolingual", "crosslingual", "global", "local", "hybrid", "adaptive",
    "joint", "latent", "hidden", "conditional", "recursive", "deep",
    "shallow", "linear", "nonlinear", "discriminative", "generative",
    "empirical", "standard", "simple", "complex", "efficient", "effective",
    "general", "generic", "open", "fast", "accurate", "morphological",
    "phonetic", "acoustic", "contextual", "distributional", "incremental",
    "scalable", "modular", "graded", "weighted", "unweighted", "annotated",
    "unannotated", "raw", "parallel", "comparable", "high", "low", "new",
    "old", "early", "late", "good", "bad", "best", "worst", "strong", "weak",
};

// Stopwords reject single-token noun phrases and trim candidate-phrase
// boundaries during harvesting.
inline constexpr const char* kStopwords[] = {
    "a", "an", "the", "this", "that", "these", "those", "some", "any",
    "each", "every", "all", "both", "few", "many", "much", "more", "most",
    "other", "others", "several", "such", "no", "nor", "not", "only", "own",
    "same", "so", "than", "too", "very", "just", "also", "then", "once",
    "here", "there", "when", "where", "why", "how", "what", "which", "who",
    "whom", "whose", "and", "but", "or", "if", "while", "because", "as",
    "until", "although", "though", "since", "unless", "whereas", "of", "at",
    "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up",
    "down", "in", "out", "on", "off", "over", "under", "again", "further",
    "via", "within", "without", "towards", "toward", "upon", "among",
    "across", "per", "around", "i", "me", "my", "we", "us", "our", "ours",
    "you", "your", "yours", "he", "him", "his", "she", "her", "hers", "it",
    "its", "they", "them", "their", "theirs", "itself", "themselves", "one",
    "ones", "am", "is", "are", "was", "were", "be", "been", "being", "have",
    "has", "had", "having", "do", "does", "did", "doing", "will", "would",
    "shall", "should", "can", "could", "may", "might", "must", "s", "t",
    "don", "now", "et", "al",
};

// Sentence-terminal abbreviations that do not end a sentence.
inline constexpr const char* kAbbreviations[] = {
    "al", "etc", "fig", "figs", "eq", "eqs", "sec", "secs", "vs", "cf",
    "resp", "approx", "dr", "mr", "mrs", "ms", "prof", "vol", "no", "pp",
    "ed", "eds", "rev", "dept", "univ", "inc", "ltd", "st",
};

}  // namespace atm::detail
