import string

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers, processors
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast


def build_tiny_checkpoint(out_dir, n_layers=12, hidden=32, seed=0) -> str:
    """Deterministic randomly initialized BERT-style checkpoint with a
    character-level WordPiece tokenizer (offset mapping included).

    The sandbox has no network access to a model hub, so extractor tests run
    against this local stand-in; any real checkpoint path works the same way.
    """
    chars = [c for c in string.printable if not c.isspace()]
    vocab = {"[PAD]": 0, "[UNK]": 1, "[CLS]": 2, "[SEP]": 3, "[MASK]": 4}
    for c in chars:
        vocab[c] = len(vocab)
    for c in chars:
        vocab["##" + c] = len(vocab)

    wp = Tokenizer(
        models.WordPiece(vocab=vocab, unk_token="[UNK]", max_input_chars_per_word=200)
    )
    wp.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    wp.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", 2), ("[SEP]", 3)],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=wp,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    tokenizer.save_pretrained(str(out_dir))

    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden,
        num_hidden_layers=n_layers,
        num_attention_heads=4,
        intermediate_size=2 * hidden,
        max_position_embeddings=512,
    )
    torch.manual_seed(seed)
    BertModel(config).save_pretrained(str(out_dir))
    return str(out_dir)


@pytest.fixture(scope="session")
def checkpoint_12(tmp_path_factory):
    return build_tiny_checkpoint(tmp_path_factory.mktemp("ckpt12"), n_layers=12)


@pytest.fixture(scope="session")
def checkpoint_6(tmp_path_factory):
    return build_tiny_checkpoint(tmp_path_factory.mktemp("ckpt6"), n_layers=6)
