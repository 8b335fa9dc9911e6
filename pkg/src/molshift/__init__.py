"""Molecular attribute transfer between non-parallel corpora.

Subpackages: smiles (string <-> graph), chemprops (properties,
fingerprints, synthesizability, structural alerts, toxicity surrogate),
guidedvae (sequence autoencoder with property-guided latents), styleflow
(autoregressive flow over style latents), transfer (latent-space
adversarial attribute transfer), metrics (evaluation), data (corpus
tooling), cli (command line).
"""

__version__ = "0.1.0"
