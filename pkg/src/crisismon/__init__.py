"""crisismon: lexicon-marker prevalence monitoring over tweet corpora.

The pipeline: ingest line-delimited tweet exports, normalize text, expand
seed lexicons with embedding nearest neighbors, rank marker categories by
shared words, match documents against category sets, aggregate daily
prevalence percentages, detect prominent change peaks on smoothed gradients,
and report heatmaps, event annotations and crisis-stage prevalence tables.
"""

from .corpus import (CorpusStats, ParseReport, Tweet, TokenizedDoc,
                     compute_corpus_stats, filter_analyzable, parse_corpus,
                     preprocess, split_hashtag, tokenize_tweet)
from .expansion import (EmbeddingTable, ExpansionConfig, associate_categories,
                        cosine, expand_lexicon, knn, load_embeddings)
from .lexicon import (CategorySet, Lexicon, MarkerMapping, load_category_set,
                      load_lexicon, load_manifest, make_lexicon, save_lexicon)
from .matching import (DailyAggregate, DailyPrevalence, Matcher,
                       aggregate_daily, build_matcher, match_doc,
                       write_prevalence_csv)
from .reporting import (EventRecord, HeatmapSpec, StageWindow, annotate_peaks,
                        crime_view, load_events_csv, load_stages_csv,
                        render_heatmap, stage_prevalence_table)
from .series import (AnalysisConfig, Peak, Series, filter_peaks, find_peaks,
                     gradient, joint_peaks, marker_peaks, smooth,
                     smoothed_gradient)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "CategorySet",
    "CorpusStats",
    "DailyAggregate",
    "DailyPrevalence",
    "EmbeddingTable",
    "EventRecord",
    "ExpansionConfig",
    "HeatmapSpec",
    "Lexicon",
    "MarkerMapping",
    "Matcher",
    "ParseReport",
    "Peak",
    "Series",
    "StageWindow",
    "Tweet",
    "TokenizedDoc",
    "aggregate_daily",
    "annotate_peaks",
    "associate_categories",
    "build_matcher",
    "compute_corpus_stats",
    "cosine",
    "crime_view",
    "expand_lexicon",
    "filter_analyzable",
    "filter_peaks",
    "find_peaks",
    "gradient",
    "joint_peaks",
    "knn",
    "load_category_set",
    "load_embeddings",
    "load_events_csv",
    "load_lexicon",
    "load_manifest",
    "load_stages_csv",
    "make_lexicon",
    "marker_peaks",
    "match_doc",
    "parse_corpus",
    "preprocess",
    "render_heatmap",
    "save_lexicon",
    "smooth",
    "smoothed_gradient",
    "split_hashtag",
    "stage_prevalence_table",
    "tokenize_tweet",
    "write_prevalence_csv",
]
