"""
Scenic Rating - predict how beautiful a place is from the photos taken around it.

This package joins geo-tagged photo metadata to rated locations, aggregates the social
signals of the photos into eleven features per location, balances the rating classes with
SMOTE and learns decision-tree classifiers (pruned trees, random forests, bagging and
boosting) evaluated by stratified cross-validation.

Key Components:
    - Spatial join and feature extraction
    - SMOTE oversampling
    - Gain-ratio and information-gain trees, random forests, bagging and AdaBoost.M1
    - Cross-validation with accuracy, macro precision and macro recall
    - Plugin-based command-line interface

Main modules:
    - scenic_cli: Main CLI entry point
    - plugins: One module per subcommand
    - geo: Ingest and feature extraction
    - learners: Learner registry
    - learning: Sampling, trees, ensembles, evaluation and model files
    - core: Configuration, logging and shared helpers
"""
