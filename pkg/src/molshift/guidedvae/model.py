"""Guided sequence VAE.

GRU encoder/decoder over SMILES tokens. The latent vector's first T_attr
coordinates are guided scalars, one per content attribute; excitation
heads regress each attribute from its own scalar, inhibition heads try
the same from the remaining coordinates through a gradient-reversal
connection, pushing attribute information out of them.
"""

import hashlib
from dataclasses import dataclass

import torch
from torch import nn

from .vocab import Vocabulary

N_ATTRIBUTES = 8
ATTRIBUTE_NAMES = ("mw", "logp", "hba", "hbd", "rot_bonds", "net_charge", "tpsa", "aromatic")
BINARY_ATTRIBUTES = frozenset({"aromatic"})


class FrozenModel(RuntimeError):
    def __init__(self):
        super().__init__("model is frozen; parameter updates are not allowed")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str  # continuous | binary
    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        assert self.kind in ("continuous", "binary")
        if self.kind == "continuous":
            assert self.std > 0

    def normalize(self, value: float) -> float:
        if self.kind == "binary":
            return value
        return (value - self.mean) / self.std

    def denormalize(self, value: float) -> float:
        if self.kind == "binary":
            return value
        return value * self.std + self.mean


@dataclass(frozen=True)
class VAEConfig:
    vocab: Vocabulary
    token_embed_dim: int = 512
    hidden_dim: int = 512
    rnn_layers: int = 3
    latent_dim: int = 128
    kl_weight: float = 0.05
    n_attributes: int = N_ATTRIBUTES
    head_hidden: int = 32
    max_len: int = 120

    def __post_init__(self):
        assert self.latent_dim > self.n_attributes
        assert self.kl_weight >= 0


class _ReverseGradient(torch.autograd.Function):
    @staticmethod
    def forward(ctx, x):
        return x

    @staticmethod
    def backward(ctx, grad):
        return -grad


def reverse_gradient(x: torch.Tensor) -> torch.Tensor:
    """Identity forward; backward multiplies the gradient by -1."""
    return _ReverseGradient.apply(x)


def _head(in_dim: int, hidden: int) -> nn.Sequential:
    return nn.Sequential(nn.Linear(in_dim, hidden), nn.Tanh(), nn.Linear(hidden, 1))


class VAEModel(nn.Module):
    def __init__(self, config: VAEConfig):
        super().__init__()
        self.config = config
        vocab_size = len(config.vocab)
        d, h, t = config.latent_dim, config.hidden_dim, config.n_attributes
        self.embed = nn.Embedding(vocab_size, config.token_embed_dim, padding_idx=0)
        self.encoder_rnn = nn.GRU(
            config.token_embed_dim, h, num_layers=config.rnn_layers, batch_first=True
        )
        self.to_mean = nn.Linear(h, d)
        self.to_logvar = nn.Linear(h, d)
        self.decoder_rnn = nn.GRU(
            config.token_embed_dim + d, h, num_layers=config.rnn_layers, batch_first=True
        )
        self.to_hidden = nn.Linear(d, config.rnn_layers * h)
        self.to_tokens = nn.Linear(h, vocab_size)
        self.excitation_heads = nn.ModuleList(
            _head(1, config.head_hidden) for _ in range(t)
        )
        self.inhibition_heads = nn.ModuleList(
            _head(d - t, config.head_hidden) for _ in range(t)
        )
        self._frozen = False

    # -- freezing ---------------------------------------------------------
    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> str:
        """Mark the model immutable and return its parameter hash."""
        for p in self.parameters():
            p.requires_grad_(False)
        self._frozen = True
        return self.parameter_hash()

    def training_parameters(self):
        if self._frozen:
            raise FrozenModel()
        return self.parameters()

    def parameter_hash(self) -> str:
        digest = hashlib.sha256()
        for name, p in sorted(self.state_dict().items()):
            digest.update(name.encode())
            digest.update(p.detach().cpu().numpy().tobytes())
        return digest.hexdigest()

    # -- encoding ---------------------------------------------------------
    def encode(
        self,
        token_ids: torch.Tensor,
        generator: torch.Generator | None = None,
        noise: torch.Tensor | None = None,
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """(B, L) int tensor -> (mean, logvar, sampled z), each (B, d).

        Pass noise=torch.zeros(...) for the deterministic z = mean draw;
        otherwise noise is standard normal from `generator`.
        """
        lengths = (token_ids != 0).sum(dim=1)
        emb = self.embed(token_ids)
        output, _ = self.encoder_rnn(emb)
        last = output[torch.arange(len(token_ids)), lengths - 1]
        mean = self.to_mean(last)
        logvar = self.to_logvar(last)
        if noise is None:
            noise = torch.randn(mean.shape, generator=generator, dtype=mean.dtype)
        z = mean + torch.exp(0.5 * logvar) * noise
        return mean, logvar, z

    # -- decoding ---------------------------------------------------------
    def decoder_logits(
        self, token_ids: torch.Tensor, z: torch.Tensor
    ) -> torch.Tensor:
        """Teacher-forced next-token logits: input (B, L), output (B, L, V)."""
        emb = self.embed(token_ids)
        zed = z.unsqueeze(1).expand(-1, emb.shape[1], -1)
        h0 = torch.tanh(self.to_hidden(z)).reshape(
            len(z), self.config.rnn_layers, self.config.hidden_dim
        ).permute(1, 0, 2).contiguous()
        output, _ = self.decoder_rnn(torch.cat([emb, zed], dim=-1), h0)
        return self.to_tokens(output)

    @torch.no_grad()
    def decode(
        self,
        z: torch.Tensor,
        mode: str = "greedy",
        generator: torch.Generator | None = None,
        temperature: float = 1.0,
    ) -> list[list[int]]:
        """Autoregressive generation from latent codes (B, d) until the
        end token or the configured length bound."""
        assert mode in ("greedy", "sample")
        vocab = self.config.vocab
        batch = len(z)
        tokens = torch.full((batch, 1), vocab.bos_id, dtype=torch.long)
        h = torch.tanh(self.to_hidden(z)).reshape(
            batch, self.config.rnn_layers, self.config.hidden_dim
        ).permute(1, 0, 2).contiguous()
        done = torch.zeros(batch, dtype=torch.bool)
        out: list[list[int]] = [[] for _ in range(batch)]
        current = tokens
        for _ in range(self.config.max_len):
            emb = self.embed(current)
            step_in = torch.cat([emb, z.unsqueeze(1)], dim=-1)
            output, h = self.decoder_rnn(step_in, h)
            logits = self.to_tokens(output[:, -1])
            if mode == "greedy":
                nxt = logits.argmax(dim=-1)
            else:
                probs = torch.softmax(logits / temperature, dim=-1)
                nxt = torch.multinomial(probs, 1, generator=generator).squeeze(1)
            for i in range(batch):
                if not done[i]:
                    if nxt[i].item() == vocab.eos_id:
                        done[i] = True
                    else:
                        out[i].append(int(nxt[i].item()))
            if bool(done.all()):
                break
            current = nxt.unsqueeze(1)
        return out

    def decode_smiles(self, z: torch.Tensor, mode: str = "greedy", **kw) -> list[str]:
        vocab = self.config.vocab
        return [
            "".join(vocab.tokens[i] for i in ids)
            for ids in self.decode(z, mode=mode, **kw)
        ]

    # -- latent layout ----------------------------------------------------
    def guided_slots(self, z: torch.Tensor) -> torch.Tensor:
        return z[:, : self.config.n_attributes]

    def rest_slots(self, z: torch.Tensor) -> torch.Tensor:
        return z[:, self.config.n_attributes :]

    def sample_prior(
        self, n: int, generator: torch.Generator | None = None
    ) -> torch.Tensor:
        return torch.randn((n, self.config.latent_dim), generator=generator)
