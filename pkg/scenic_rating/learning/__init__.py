"""
Learning components: SMOTE balancing, tree induction, ensembles, evaluation and model files.
"""
