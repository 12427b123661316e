/** Quiz answering: stateless check with per-option feedback. */

import type { QuizChunk } from "./types.js";

export type OptionFeedback = "correct" | "incorrect" | "missed" | "neutral";

export interface QuizFeedback {
  correct: boolean;
  perOption: OptionFeedback[];
}

/** Correct iff the selection equals the correct set exactly. */
export function answerQuiz(chunk: QuizChunk, selected: Set<number>): QuizFeedback {
  const correctSet = new Set(chunk.correct);
  const correct =
    selected.size === correctSet.size && [...selected].every((i) => correctSet.has(i));
  const perOption = chunk.options.map((_, index): OptionFeedback => {
    const picked = selected.has(index);
    const wanted = correctSet.has(index);
    if (picked && wanted) return "correct";
    if (picked && !wanted) return "incorrect";
    if (!picked && wanted) return "missed";
    return "neutral";
  });
  return { correct, perOption };
}
