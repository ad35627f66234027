// unigen-support v1.0.0 — do not edit
using System;
using System.Collections.Generic;
using System.Globalization;
using System.Reflection;
using UnityEngine;

namespace UniGenSupport
{
    /// <summary>
    /// Safe field binding for generated scripts: set-by-name with type
    /// coercion, returning a flag instead of throwing. Wrong inputs degrade
    /// to a single warning per (type, field) pair per session.
    /// </summary>
    public static class ReflectionHelper
    {
        private static readonly HashSet<string> Warned = new HashSet<string>();

        public static bool SetFieldSafe(object target, string fieldName, object value)
        {
            if (target == null || string.IsNullOrEmpty(fieldName))
            {
                Warn("<null>", fieldName ?? "<null>", "target or field name missing");
                return false;
            }
            Type type = target.GetType();
            FieldInfo field = FindField(type, fieldName);
            if (field == null)
            {
                Warn(type.Name, fieldName, "no such bindable field");
                return false;
            }
            object converted;
            if (!TryConvert(value, field.FieldType, out converted))
            {
                Warn(type.Name, fieldName,
                    "cannot convert " + Describe(value) + " to " + field.FieldType.Name);
                return false;
            }
            try
            {
                field.SetValue(target, converted);
                return true;
            }
            catch (Exception ex)
            {
                Warn(type.Name, fieldName, "assignment failed: " + ex.Message);
                return false;
            }
        }

        public static bool SetTagSafe(GameObject target, string tag)
        {
            if (target == null || string.IsNullOrEmpty(tag))
            {
                return false;
            }
            try
            {
                target.tag = tag;
                return true;
            }
            catch (Exception)
            {
                Warn(target.name, "tag", "tag '" + tag + "' is not defined in the project");
                return false;
            }
        }

        public static GameObject FindByName(string name)
        {
            if (string.IsNullOrEmpty(name))
            {
                return null;
            }
            return GameObject.Find(name);
        }

        private static FieldInfo FindField(Type type, string name)
        {
            while (type != null)
            {
                FieldInfo field = type.GetField(
                    name, BindingFlags.Public | BindingFlags.NonPublic | BindingFlags.Instance);
                if (field != null)
                {
                    if (field.IsPublic || field.IsDefined(typeof(SerializeField), true))
                    {
                        return field;
                    }
                    return null; // private and not serialized: not bindable
                }
                type = type.BaseType;
            }
            return null;
        }

        private static bool TryConvert(object value, Type targetType, out object converted)
        {
            converted = null;
            if (value == null)
            {
                // null only fits reference types; value-typed fields keep
                // their default instead.
                return !targetType.IsValueType;
            }
            if (targetType.IsInstanceOfType(value))
            {
                converted = value;
                return true;
            }
            GameObject go = value as GameObject;
            if (go != null)
            {
                if (targetType == typeof(Transform))
                {
                    converted = go.transform;
                    return true;
                }
                if (typeof(Component).IsAssignableFrom(targetType))
                {
                    Component component = go.GetComponent(targetType);
                    if (component != null)
                    {
                        converted = component;
                        return true;
                    }
                    return false;
                }
            }
            Component valueComponent = value as Component;
            if (valueComponent != null && targetType == typeof(GameObject))
            {
                converted = valueComponent.gameObject;
                return true;
            }
            if (IsNumeric(value) && IsNumericType(targetType))
            {
                try
                {
                    converted = Convert.ChangeType(value, targetType, CultureInfo.InvariantCulture);
                    return true;
                }
                catch (Exception)
                {
                    return false;
                }
            }
            if (targetType == typeof(string))
            {
                converted = Convert.ToString(value, CultureInfo.InvariantCulture);
                return true;
            }
            return false;
        }

        private static bool IsNumeric(object value)
        {
            return value is int || value is long || value is float || value is double
                || value is short || value is byte || value is decimal;
        }

        private static bool IsNumericType(Type type)
        {
            return type == typeof(int) || type == typeof(long) || type == typeof(float)
                || type == typeof(double) || type == typeof(short) || type == typeof(byte)
                || type == typeof(decimal);
        }

        private static string Describe(object value)
        {
            return value == null ? "null" : value.GetType().Name;
        }

        private static void Warn(string typeName, string fieldName, string reason)
        {
            string key = typeName + "." + fieldName;
            if (Warned.Add(key))
            {
                Debug.LogWarning("ReflectionHelper: " + key + ": " + reason);
            }
        }
    }
}
