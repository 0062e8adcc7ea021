from attndynamics import config


def test_get_default_config_does_not_change():
    old_config = config.get_all()

    key = "symmetry_tolerance"
    value = 0.5
    config.set({key: value})
    config.set_to_default()

    assert config.get(key) != value

    config.set(old_config)


def test_set_and_get_config():
    key = "margin_tolerance"
    old_value = config.get(key)
    value = 1e-3

    config.set({key: value})
    assert config.get(key) == value

    config.set({key: old_value})


def test_get_all():
    assert config.get_all() == config._data


def test_default_tolerances():
    assert config.get("symmetry_tolerance") == 1e-12
    assert config.get("fd_step") == 1e-5
    assert config.get("attention_floor") == 1e-10
