# relay-kit/src/relay_kit/utils/templating.py

"""
Jinja2 templates for the human-readable (`--format text`) CLI output.
"""

from typing import Any, Dict

from jinja2 import Environment, StrictUndefined, TemplateError


def fixed_filter(value: Any, digits: int = 4) -> str:
    """Formats a number with a fixed count of decimals."""
    if value is None:
        return "-"
    return f"{float(value):.{digits}f}"


def members_filter(value: Any) -> str:
    return "{" + ", ".join(str(v) for v in value) + "}"


def create_jinja_environment() -> Environment:
    """
    Creates the Jinja2 environment used for text reports.

    Output is plain text, so autoescaping is off; undefined variables raise.
    """
    jinja_env = Environment(
        autoescape=False, undefined=StrictUndefined, trim_blocks=True, lstrip_blocks=True
    )
    jinja_env.filters["fixed"] = fixed_filter
    jinja_env.filters["members"] = members_filter
    return jinja_env


TEXT_TEMPLATES: Dict[str, str] = {
    "mux": (
        "multiplexing gain m_G = {{ m }}\n"
        "minimum vertex cut    = {{ cut | members }} (capacity {{ capacity }})\n"
        "max-flow nu           = {{ nu }}\n"
        "layered               = {{ layered | lower }}\n"
    ),
    "simulate": (
        "{{ '%10s'|format('p_db') }} {{ '%12s'|format('mean_bits') }} {{ '%10s'|format('stderr') }}\n"
        "{% for row in rows %}"
        "{{ '%10s'|format(row.p_db | fixed(2)) }} {{ '%12s'|format(row.mean_bits | fixed) }} "
        "{{ '%10s'|format(row.stderr | fixed) }}\n"
        "{% endfor %}"
        "mode={{ mode }} samples={{ samples }} T={{ time_slots }} "
        "slope={{ slope | fixed(3) }} (endpoints {{ endpoint_slope | fixed(3) }})\n"
    ),
    "certify": (
        "certificate {{ 'PASS' if pass else 'FAIL' }}: rank {{ rank }} >= bound {{ bound }}"
        " (nu={{ nu }}, T={{ T }}, l_G={{ l_G }}, layered={{ layered | lower }})\n"
    ),
    "region": (
        "multiplexing gain region for senders {{ senders | members }} -> {{ destination }}\n"
        "{% for c in constraints %}"
        "  sum r over {{ c.members | members }} <= {{ c.bound }}\n"
        "{% endfor %}"
    ),
    "multicast": (
        "multicast gain to {{ destinations | members }} = {{ gain }}\n"
        "{% for d, g in pairwise.items() %}"
        "  {{ d }}: {{ g }}\n"
        "{% endfor %}"
    ),
    "activation": (
        "{% for row in rows %}"
        "p_db={{ row.p_db | fixed(2) }} empirical={{ row.empirical | fixed }} "
        "exact={{ row.exact | fixed }}\n"
        "{% endfor %}"
    ),
}


def render_report(command: str, payload: Dict[str, Any]) -> str:
    """
    Renders the text form of a command's payload.

    Raises:
        ValueError: If the command has no template or rendering fails.
    """
    if command not in TEXT_TEMPLATES:
        raise ValueError(f"No text template for command '{command}'.")
    try:
        template = create_jinja_environment().from_string(TEXT_TEMPLATES[command])
        return template.render(**payload)
    except TemplateError as e:
        raise ValueError(f"Rendering the '{command}' report failed: {e}") from e
