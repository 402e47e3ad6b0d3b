from __future__ import annotations

import pytest

from maintminer.javaparse import JavaParseError, parse_java

RICH = """
package com.example.app;

import java.util.List;
import java.util.Map;

/** Registry of widgets. */
public final class Registry extends Base implements AutoCloseable, Iterable<String> {
    /** Count of widgets. */
    private int count = 0;
    private static final String NAME = "reg", ALT = "alt";
    private Map<String, List<Integer>> index = new HashMap<>();

    /**
     * Adds a widget.
     */
    public synchronized int add(Widget w, Map<String, Integer> opts) throws IOException {
        // bump the counter
        count += 1;
        if (count > MAX) {
            trim(count);
        } else if (count < 0) {
            reset();
        } else {
            log.debug("steady");
        }
        for (int i = 0; i < count; i++) {
            touch(i);
        }
        while (pending()) {
            drain();
        }
        do {
            spin();
        } while (busy());
        try (AutoCloseable c = open()) {
            use(c);
        } catch (IOException e) {
            throw new IllegalStateException(e);
        } finally {
            cleanup();
        }
        switch (count) {
            case 0:
                zero();
                break;
            default:
                many();
        }
        synchronized (this) {
            flush();
        }
        return count;
    }

    protected abstract void sweep();

    static class Inner {
        void ping() { }
    }
}

interface Hook {
    void fire();
}

enum Mode {
    FAST, SLOW;

    public boolean quick() {
        return this == FAST;
    }
}
"""


def test_parse_rich_unit():
    unit = parse_java(RICH)
    assert unit.package == "com.example.app"
    types = unit.type_map()
    assert set(types) == {"Registry", "Registry.Inner", "Hook", "Mode"}
    reg = types["Registry"]
    assert reg.kind == "class"
    assert reg.javadoc == "Registry of widgets."
    assert {"public", "final"} <= set(reg.modifiers)
    assert reg.superclass == "Base"
    assert set(reg.parent_interfaces) == {"AutoCloseable", "Iterable<String>"}


def test_fields():
    reg = parse_java(RICH).type_map()["Registry"]
    by_name = {f.name: f for f in reg.fields}
    assert set(by_name) == {"count", "NAME", "ALT", "index"}
    assert by_name["count"].javadoc == "Count of widgets."
    assert by_name["count"].initializer == "0"
    assert by_name["NAME"].type == "String"
    assert "final" in by_name["NAME"].modifiers
    assert by_name["index"].type == "Map<String,List<Integer>>"


def test_methods_and_statements():
    reg = parse_java(RICH).type_map()["Registry"]
    add = next(m for m in reg.methods if m.name == "add")
    assert add.return_type == "int"
    assert add.params == [("Widget", "w"), ("Map<String,Integer>", "opts")]
    assert add.javadoc == "Adds a widget."
    assert add.comments == ["bump the counter"]
    kinds = [s.kind for s in add.body]
    assert kinds == ["expr", "if", "for", "while", "do", "try", "switch", "sync", "return"]
    if_stmt = add.body[1]
    assert if_stmt.condition == "count > MAX"
    assert if_stmt.children[-1].kind == "else"
    try_stmt = add.body[5]
    assert [c.kind for c in try_stmt.children] == ["expr", "catch", "finally"]
    sweep = next(m for m in reg.methods if m.name == "sweep")
    assert sweep.body is None


def test_enum_and_interface():
    types = parse_java(RICH).type_map()
    assert types["Hook"].kind == "interface"
    mode = types["Mode"]
    assert mode.kind == "enum"
    assert [m.name for m in mode.methods] == ["quick"]


def test_empty_and_absent_sources():
    assert parse_java(None).types == []
    assert parse_java("   \n").types == []


def test_unparseable_raises():
    with pytest.raises(JavaParseError):
        parse_java("public class { {")
    with pytest.raises(JavaParseError):
        parse_java('class A { void f() { String s = "unterminated; } }')


def test_statement_text_is_whitespace_insensitive():
    a = parse_java("class A { void f() { x = y + 1; } }")
    b = parse_java("class A { void f() {\n    x   =\n y + 1 ;\n} }")
    sa = a.type_map()["A"].methods[0].body[0]
    sb = b.type_map()["A"].methods[0].body[0]
    assert sa.text == sb.text


def test_anonymous_class_folds_into_statement():
    src = """
    class A {
        void f() {
            run(new Runnable() { public void run() { work(); } });
            after();
        }
    }
    """
    body = parse_java(src).type_map()["A"].methods[0].body
    assert len(body) == 2
    assert "Runnable" in body[0].text


def test_varargs_and_annotations():
    src = """
    class A {
        @Override
        @Deprecated
        void f(final String... parts) { join(parts); }
        @Test
        public void checkThing() { probe(); }
    }
    """
    methods = parse_java(src).type_map()["A"].methods
    f = methods[0]
    assert f.params[0][1] == "parts"
    assert any("Override" in a for a in f.annotations)
    assert any("Test" in a for a in methods[1].annotations)
