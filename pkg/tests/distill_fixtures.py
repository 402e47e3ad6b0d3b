"""Hand-built before/after Java pairs with hand-derived expected multisets.

Each expectation was worked out from the taxonomy semantics and the
distiller's documented matching rules (bigram threshold 0.6, add/remove
of members counted once, no member-body noise for new methods/classes).
"""

from __future__ import annotations

from maintminer.changetypes import ChangeType as CT

BASE = """\
public class Account {
    private int balance;

    /** Applies a deposit. */
    public int deposit(int amount) {
        balance = balance + amount;
        audit(amount);
        return balance;
    }

    public void audit(int amount) {
        log.info(amount);
    }
}
"""

GUARD = """\
class Guard {
    void check(boolean armed) {
        if (armed) {
            engage();
        }
    }
}
"""

# name -> (before, after, expected multiset)
FIXTURES = {
    "identity": (BASE, BASE, {}),
    "whitespace_only": (
        BASE,
        BASE.replace("balance = balance + amount;", "balance  =  balance +\n            amount ;"),
        {},
    ),
    "parameter_insert": (
        BASE,
        BASE.replace("deposit(int amount)", "deposit(int amount, int fee)"),
        {CT.PARAMETER_INSERT: 1},
    ),
    "parameter_delete": (
        BASE.replace("deposit(int amount)", "deposit(int amount, int fee)"),
        BASE,
        {CT.PARAMETER_DELETE: 1},
    ),
    "parameter_insert_three": (
        BASE,
        BASE.replace("deposit(int amount)", "deposit(int amount, int fee, long when, String memo)"),
        {CT.PARAMETER_INSERT: 3},
    ),
    "doc_delete": (
        BASE,
        BASE.replace("    /** Applies a deposit. */\n", ""),
        {CT.DOC_DELETE: 1},
    ),
    "doc_insert": (
        BASE,
        BASE.replace("    public void audit", "    /** Writes the audit trail. */\n    public void audit"),
        {CT.DOC_INSERT: 1},
    ),
    "doc_update": (
        BASE,
        BASE.replace("Applies a deposit.", "Applies a deposit and yields the balance."),
        {CT.DOC_UPDATE: 1},
    ),
    "added_method": (
        BASE,
        BASE.replace(
            "}\n",
            "}\n\n    public int fees(int rate) {\n        int fee = rate * 2;\n        book(fee);\n        return fee;\n    }\n",
            1,
        ).replace("return balance;\n    }\n\n\n", "return balance;\n    }\n\n", 1),
        {CT.ADDITIONAL_FUNCTIONALITY: 1},
    ),
    "removed_method": (
        BASE,
        BASE.replace(
            "\n    public void audit(int amount) {\n        log.info(amount);\n    }\n", ""
        ),
        {CT.REMOVED_FUNCTIONALITY: 1},
    ),
    "added_class_from_absent": (None, BASE, {CT.ADDITIONAL_CLASS: 1}),
    "removed_class_to_absent": (BASE, None, {CT.REMOVED_CLASS: 1}),
    "added_second_class": (
        BASE,
        BASE + "\nclass Helper {\n    void help() {\n        assist();\n    }\n}\n",
        {CT.ADDITIONAL_CLASS: 1},
    ),
    "statement_insert_one": (
        BASE,
        BASE.replace("        audit(amount);\n", "        audit(amount);\n        notifyListeners(amount, balance);\n"),
        {CT.STATEMENT_INSERT: 1},
    ),
    "statement_insert_three": (
        BASE,
        BASE.replace(
            "        audit(amount);\n",
            "        audit(amount);\n        notifyListeners(amount, balance);\n"
            "        journal.record(amount);\n        metrics.bump(\"deposit\");\n",
        ),
        {CT.STATEMENT_INSERT: 3},
    ),
    "statement_delete_two": (
        BASE.replace(
            "        audit(amount);\n",
            "        audit(amount);\n        notifyListeners(amount, balance);\n"
            "        journal.record(amount);\n",
        ),
        BASE,
        {CT.STATEMENT_DELETE: 2},
    ),
    "statement_update_similar": (
        BASE,
        BASE.replace("balance = balance + amount;", "balance = balance + amount + bonus;"),
        {CT.STATEMENT_UPDATE: 1},
    ),
    "statement_rewrite_dissimilar": (
        BASE,
        BASE.replace("log.info(amount);", "completelyDifferentCall();"),
        {CT.STATEMENT_DELETE: 1, CT.STATEMENT_INSERT: 1},
    ),
    "comment_insert": (
        BASE,
        BASE.replace("        audit(amount);", "        // keep the ledger in sync\n        audit(amount);"),
        {CT.COMMENT_INSERT: 1},
    ),
    "comment_delete": (
        BASE.replace("        audit(amount);", "        // keep the ledger in sync\n        audit(amount);"),
        BASE,
        {CT.COMMENT_DELETE: 1},
    ),
    "comment_update": (
        BASE.replace("        audit(amount);", "        // keep the ledger in sync\n        audit(amount);"),
        BASE.replace("        audit(amount);", "        // keep the ledger in sync always\n        audit(amount);"),
        {CT.COMMENT_UPDATE: 1},
    ),
    "alternative_part_insert": (
        GUARD,
        GUARD.replace("        }\n", "        } else {\n            standDown();\n        }\n"),
        {CT.ALTERNATIVE_PART_INSERT: 1, CT.STATEMENT_INSERT: 1},
    ),
    "alternative_part_delete": (
        GUARD.replace("        }\n", "        } else {\n            standDown();\n        }\n"),
        GUARD,
        {CT.ALTERNATIVE_PART_DELETE: 1, CT.STATEMENT_DELETE: 1},
    ),
    "removed_object_state": (
        BASE,
        BASE.replace("    private int balance;\n", ""),
        {CT.REMOVED_OBJECT_STATE: 1},
    ),
    "additional_object_state": (
        BASE,
        BASE.replace("    private int balance;", "    private int balance;\n    private long lastSeen;"),
        {CT.ADDITIONAL_OBJECT_STATE: 1},
    ),
    "condition_expression_change": (
        GUARD,
        GUARD.replace("if (armed)", "if (armed && ready)"),
        {CT.CONDITION_EXPRESSION_CHANGE: 1},
    ),
    "statement_ordering_change": (
        BASE,
        BASE.replace(
            "        balance = balance + amount;\n        audit(amount);\n",
            "        audit(amount);\n        balance = balance + amount;\n",
        ),
        {CT.STATEMENT_ORDERING_CHANGE: 1},
    ),
    "statement_parent_change": (
        GUARD.replace(
            "        if (armed) {\n            engage();\n        }\n",
            "        prime(42, \"now\");\n        if (armed) {\n            engage();\n        }\n",
        ),
        GUARD.replace(
            "        if (armed) {\n            engage();\n        }\n",
            "        if (armed) {\n            prime(42, \"now\");\n            engage();\n        }\n",
        ),
        {CT.STATEMENT_PARENT_CHANGE: 1},
    ),
    "return_type_change": (
        BASE,
        BASE.replace("public int deposit", "public long deposit"),
        {CT.RETURN_TYPE_CHANGE: 1},
    ),
    "return_type_insert": (
        BASE,
        BASE.replace("public void audit", "public boolean audit"),
        {CT.RETURN_TYPE_INSERT: 1},
    ),
    "return_type_delete": (
        BASE.replace("public void audit", "public boolean audit"),
        BASE,
        {CT.RETURN_TYPE_DELETE: 1},
    ),
    "parameter_type_change": (
        BASE,
        BASE.replace("deposit(int amount)", "deposit(long amount)"),
        {CT.PARAMETER_TYPE_CHANGE: 1},
    ),
    "parameter_renaming": (
        BASE,
        BASE.replace("public void audit(int amount)", "public void audit(int value)"),
        {CT.PARAMETER_RENAMING: 1},
    ),
    "parameter_ordering_change": (
        BASE.replace("deposit(int amount)", "deposit(int amount, String memo)"),
        BASE.replace("deposit(int amount)", "deposit(String memo, int amount)"),
        {CT.PARAMETER_ORDERING_CHANGE: 1},
    ),
    "accessibility_increase": (
        BASE.replace("    public void audit", "    private void audit"),
        BASE,
        {CT.INCREASING_ACCESSIBILITY_CHANGE: 1},
    ),
    "accessibility_decrease": (
        BASE,
        BASE.replace("    public void audit", "    protected void audit"),
        {CT.DECREASING_ACCESSIBILITY_CHANGE: 1},
    ),
    "final_added_to_method": (
        BASE,
        BASE.replace("    public void audit", "    public final void audit"),
        {CT.REMOVING_METHOD_OVERRIDABILITY: 1},
    ),
    "final_removed_from_field": (
        BASE.replace("    private int balance;", "    private final int balance;"),
        BASE,
        {CT.ADDING_ATTRIBUTE_MODIFIABILITY: 1},
    ),
    "parent_class_insert": (
        BASE,
        BASE.replace("public class Account {", "public class Account extends Ledger {"),
        {CT.PARENT_CLASS_INSERT: 1},
    ),
    "parent_interface_insert": (
        BASE,
        BASE.replace("public class Account {", "public class Account implements Closeable {"),
        {CT.PARENT_INTERFACE_INSERT: 1},
    ),
    "attribute_type_change": (
        BASE,
        BASE.replace("private int balance;", "private long balance;"),
        {CT.ATTRIBUTE_TYPE_CHANGE: 1},
    ),
    "method_renaming": (
        BASE,
        BASE.replace("public void audit(int amount)", "public void record(int amount)"),
        {CT.METHOD_RENAMING: 1},
    ),
    "class_renaming": (
        GUARD,
        GUARD.replace("class Guard {", "class Sentry {"),
        {CT.CLASS_RENAMING: 1},
    ),
    # "balance = balance + amount" -> "funds = funds + amount" sits just
    # above the 0.6 bigram threshold (update); "return balance" ->
    # "return funds" sits below it (delete+insert)
    "attribute_renaming": (
        BASE,
        BASE.replace("private int balance;", "private int funds;")
        .replace("balance = balance + amount;", "funds = funds + amount;")
        .replace("return balance;", "return funds;"),
        {CT.ATTRIBUTE_RENAMING: 1, CT.STATEMENT_UPDATE: 1,
         CT.STATEMENT_DELETE: 1, CT.STATEMENT_INSERT: 1},
    ),
}

# the worked three-file commit: four parameters appear on one method,
# two methods lose their javadoc, one brand-new method arrives
WORKED_COMMIT_ID = "1a2b3c"

WORKED_FILE1_BEFORE = """\
public class Transfers {
    public void send(int amount) {
        route(amount);
    }
}
"""
WORKED_FILE1_AFTER = """\
public class Transfers {
    public void send(int amount, int fee, long when, String memo) {
        route(amount);
    }
}
"""
WORKED_FILE2_BEFORE = """\
public class Codec {
    /** Encodes one frame. */
    public byte[] encode(byte[] frame) {
        return frame;
    }

    /** Decodes one frame. */
    public byte[] decode(byte[] frame) {
        return frame;
    }
}
"""
WORKED_FILE2_AFTER = """\
public class Codec {
    public byte[] encode(byte[] frame) {
        return frame;
    }

    public byte[] decode(byte[] frame) {
        return frame;
    }
}
"""
WORKED_FILE3_BEFORE = """\
public class Router {
    public void route(int amount) {
        hop(amount);
    }
}
"""
WORKED_FILE3_AFTER = """\
public class Router {
    public void route(int amount) {
        hop(amount);
    }

    public void reroute(int amount) {
        drop(amount);
        hop(amount);
    }
}
"""

WORKED_LEGACY_LINES = [
    "1a2b3c#PARAMETER_INSERT#file1.java",
    "1a2b3c#ADDITIONAL_FUNCTIONALITY#file3.java",
    "1a2b3c#DOC_DELETE#file2.java",
    "1a2b3c#PARAMETER_INSERT#file1.java",
    "1a2b3c#PARAMETER_INSERT#file1.java",
    "1a2b3c#DOC_DELETE#file2.java",
]
