"""Walk an elicitation session the way the HTTP service drives it.

A simulated decision maker compares five lunch options, answers seven
questions in the prescribed order, then abandons; the session still yields a
full weight vector because the answered comparisons form a connected graph.

Run with: python demos/05_questionnaire_session.py
(The same flow over HTTP: `pcmfill serve --port 8000` plus the frontend.)
"""

import numpy as np

from pcmfill.elicit import ReferenceData, create_session

rng = np.random.default_rng(3)
labels = ["ramen", "falafel", "pizza", "tacos", "bibimbap"]
true_worth = {"ramen": 5.0, "falafel": 2.0, "pizza": 4.0, "tacos": 3.0, "bibimbap": 1.0}

reference = ReferenceData.load_default()
session = create_session(5, item_labels=labels, reference=reference)
print("prescribed order:", [f"a{i+1}{j+1}" for i, j in session.sequence.steps])

for _ in range(7):
    pair = session.next_question()
    i, j = pair
    # answer with the true worth ratio plus sloppy rounding
    ratio = true_worth[labels[i]] / true_worth[labels[j]]
    answer = float(np.round(ratio * rng.uniform(0.8, 1.25), 1)) or 0.1
    session.record_answer(pair, answer)
    est = session.estimate(reference)
    status = "connected" if est.connected else "not connected yet"
    print(f"answered {labels[i]} vs {labels[j]} = {answer:<5} -> {status}")

est = session.estimate(reference)
print("\nabandoning after 7 of", len(session.sequence.steps), "questions")
order = np.argsort(est.weights)[::-1]
for rank, idx in enumerate(order, 1):
    print(f"  {rank}. {labels[idx]:9s} weight {est.weights[idx]:.3f}")
hint = est.reliability_hint
print("\nexpected error at this point ~", round(hint["mean_d_euc_avg"], 3),
      "| expected rank agreement ~", round(hint["mean_tau_avg"], 3))
