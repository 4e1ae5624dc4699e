"""Relation extraction over entity-pair walks.

Thin package façade over the C++ extension module: corpus and decision I/O,
vocabulary building, model training and prediction, micro-averaged scoring,
significance testing, synthetic data generation, checkpoints and a
finite-difference gradient check.
"""

from relwalk._core import (
    BucketScore,
    Decision,
    EntityCountBucket,
    EntityMention,
    EpochLog,
    FdReport,
    GeneratorSpec,
    GoldRelation,
    ModelParams,
    PrfScore,
    Rng,
    Sentence,
    TrainConfig,
    TrainResult,
    Vocabulary,
    approx_randomization,
    breakdown_by_entity_count,
    default_entity_buckets,
    generate_synthetic,
    gold_decisions,
    gradient_check,
    init_params,
    load_checkpoint,
    micro_prf,
    parse_corpus,
    parse_corpus_file,
    parse_decisions,
    parse_decisions_file,
    parse_generator_spec,
    parse_generator_spec_file,
    predict,
    save_checkpoint,
    serialize_sentence,
    train,
    validate_sentence,
    write_corpus,
    write_decisions,
)

__version__ = "0.1.0"

__all__ = [
    "BucketScore",
    "Decision",
    "EntityCountBucket",
    "EntityMention",
    "EpochLog",
    "FdReport",
    "GeneratorSpec",
    "GoldRelation",
    "ModelParams",
    "PrfScore",
    "Rng",
    "Sentence",
    "TrainConfig",
    "TrainResult",
    "Vocabulary",
    "approx_randomization",
    "breakdown_by_entity_count",
    "default_entity_buckets",
    "generate_synthetic",
    "gold_decisions",
    "gradient_check",
    "init_params",
    "load_checkpoint",
    "micro_prf",
    "parse_corpus",
    "parse_corpus_file",
    "parse_decisions",
    "parse_decisions_file",
    "parse_generator_spec",
    "parse_generator_spec_file",
    "predict",
    "save_checkpoint",
    "serialize_sentence",
    "train",
    "validate_sentence",
    "write_corpus",
    "write_decisions",
]
