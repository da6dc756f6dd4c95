"""Role prompt templates and default in-context examples.

build_prompt interpolates the library context blocks into these templates
verbatim; determinism of the whole scripted pipeline rests on that.
Every role must answer inside a fenced JSON block.
"""

from __future__ import annotations

DIRECTOR_FORMAT = '''Answer with a fenced JSON block only:
```json
{{"use_action": true, "use_motion": false, "use_decoration": false, "duration": "moderate"}}
```'''

DIRECTOR_TEMPLATE = """You are the scene director for a 3D story engine. \
For the given story fragment, decide which of the three function libraries \
must be dispatched to stage it, and how long the fragment should run.

Library introductions:
[action] {action_intro}
[motion] {motion_intro}
[decoration] {decoration_intro}

Duration must be exactly one of: "fast", "moderate", "slow", "emphasis". \
Pick "fast" for brief beats, "moderate" for ordinary ones, "slow" for \
extended passages and "emphasis" for highlighted moments.

""" + DIRECTOR_FORMAT + """

In-context examples:
{examples}"""


ACTION_FORMAT = '''Answer with a fenced JSON block only:
```json
{{"assignments": [{{"entity": "<name>", "major_category": "<major>", "sub_action": "<sub>", "args": {{}}}}]}}
```'''

ACTION_TEMPLATE = """You schedule actions for the non-humanoid characters \
in a story fragment, using the action function library.

Library introduction:
{intro}

Major action categories:
{majors}

Functions:
{functions}

Variables:
{variables}

Dispatch hierarchically: pick the major category first, then a sub-action \
inside it. Every sub_action must belong to its major_category.

""" + ACTION_FORMAT + """

In-context examples:
{examples}"""


# Interpolated as plain values (single braces stay literal).
MOTION_FORMAT = '''Answer with a fenced JSON block only:
```json
{"assignments": [{"entity": "<humanoid name>", "function": "<motion function>", "args": {}}]}
```'''

DECORATION_FORMAT = '''Answer with a fenced JSON block only:
```json
{"assignments": [{"function": "<decoration function>", "target": "<entity or null>", "args": {}}]}
```'''

DISPATCH_TEMPLATE = """You schedule {subject} for a story fragment, using \
the {role} function library. Find the functions that fit the fragment.

Library introduction:
{intro}

Functions:
{functions}

Variables:
{variables}

{format_block}

In-context examples:
{examples}"""


CONTINUATION_TEMPLATE = """You continue an existing 3D story. The new \
fragments you write must be stageable with the three function libraries \
below: do not invent behaviours or characters the libraries and the \
existing cast cannot realize.

Library introductions:
[action] {action_intro}
[motion] {motion_intro}
[decoration] {decoration_intro}

Explain your reasoning, then give the new fragments. Answer with a fenced \
JSON block only:
```json
{{"reasoning": "<why these fragments fit>", "fragments": ["<fragment 1>", "<fragment 2>"]}}
```

In-context examples:
{examples}"""


SEGMENTER_TEMPLATE = """Split the given narrative into event fragments, \
each describing one stageable beat. Keep every word: the fragments joined \
in order must reproduce the narrative (whitespace aside). Answer with a \
fenced JSON block only:
```json
{"fragments": ["<fragment 1>", "<fragment 2>"]}
```"""


CHECKER_TEMPLATE = """You review one agent output against its story \
fragment. Judge whether the dispatched libraries or functions match the \
plot; if not, state concisely how to fix them. Answer with a fenced JSON \
block only:
```json
{"verdict": "pass", "feedback": ""}
```
Use "fail" with non-empty feedback when anything should change."""


DEFAULT_EXAMPLES = {
    "director": """fragment: "The cart rolls slowly to the gate."
```json
{"use_action": true, "use_motion": false, "use_decoration": false, "duration": "slow"}
```""",
    "action": """fragment: "The cart rolls straight to the gate."
```json
{"assignments": [{"entity": "cart", "major_category": "straight line movement", "sub_action": "constant speed movement", "args": {}}]}
```""",
    "motion": """fragment: "The guide walks along the marked path."
```json
{"assignments": [{"entity": "guide", "function": "trajectory-based motion", "args": {"trajectory": [[0, 0, 0], [2, 0, 0]]}}]}
```""",
    "decoration": """fragment: "Spotlights pick out the winner."
```json
{"assignments": [{"function": "light illumination", "target": "winner", "args": {}}]}
```""",
    "continuation": """condition: "quiet ending"
Good continuation:
```json
{"reasoning": "Both characters are already on stage and the libraries can stage a calm close.", "fragments": ["The cart rolls back to the gate and stops.", "The guide waves once more."]}
```
Counterexample (do NOT do this; it invents an unknown character and an
unstageable behaviour):
```json
{"reasoning": "A dragon swoops in and breathes fire.", "fragments": ["A dragon melts the gate."]}
```""",
}
