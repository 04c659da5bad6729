"""Corpus quality filtering.

Two filters keep training data clean: a character n-gram language model
rejects linguistically incoherent text by perplexity, and a sparsity rule
discards documents containing any table with more than 25% empty cells.
"""

from ocrkit import FilterConfig, filter_corpus, parse_markdown, perplexity, train_lm

TRAINING_TEXTS = [
    "تعد المخطوطات العربية من أهم مصادر التراث الثقافي",
    "تحتوي المكتبات الوطنية على آلاف الوثائق التاريخية",
    "يعمل الباحثون على رقمنة الكتب والدوريات القديمة",
    "تساعد تقنيات التعرف الضوئي في أرشفة النصوص",
    "نص سليم\n\n<table><tr><td>أ</td><td>ب</td></tr></table>",
]

CANDIDATES = {
    "clean prose": "تسهم رقمنة الوثائق في حفظ التراث العربي",
    "gibberish": "ظظظ ثثقق ييبب ززذذ غغخخ",
    "sparse table": ("نص سليم\n\n<table><tr><td>أ</td><td></td>"
                     "<td></td><td></td></tr></table>"),
    "dense table": ("نص سليم\n\n<table><tr><td>أ</td><td>ب</td>"
                    "<td>ج</td><td>د</td></tr></table>"),
}


def main() -> None:
    lm = train_lm(TRAINING_TEXTS, order=3, k=0.1)

    print("perplexity per candidate:")
    for name, text in CANDIDATES.items():
        print(f"  {name:14s} {perplexity(lm, text):10.1f}")

    docs = {name: parse_markdown(text) for name, text in CANDIDATES.items()}
    kept, rejected = filter_corpus(
        list(docs.values()), lm, FilterConfig(ppl_threshold=20.0))

    by_doc = {id(doc): name for name, doc in docs.items()}
    print(f"\nkept {len(kept)} of {len(docs)}:")
    for doc in kept:
        print(f"  + {by_doc[id(doc)]}")
    for rejection in rejected:
        print(f"  - {by_doc[id(rejection.document)]}: {rejection.reason}"
              f" ({rejection.value:.2f})")


if __name__ == "__main__":
    main()
